use rand::Rng;

use super::kind::ValueKind;
use super::primitive::PrimitiveSet;
use super::tree::ProgramTree;

/// Chance of stopping with a leaf once the minimum height is reached.
pub const LEAF_PROBABILITY: f64 = 0.3;

const MAX_ATTEMPTS: usize = 1000;

fn grow<R: Rng + ?Sized>(
    pset: &PrimitiveSet,
    rng: &mut R,
    slot: ValueKind,
    depth: usize,
    min_height: usize,
    max_height: usize,
    out: &mut Vec<u8>,
) -> usize {
    let leaves = pset.leaves_for(slot);
    let branches = pset.branches_for(slot);
    let leaf = depth >= max_height
        || branches.is_empty()
        || (depth >= min_height && rng.gen_bool(LEAF_PROBABILITY));
    if leaf {
        out.push(leaves[rng.gen_range(0..leaves.len())]);
        return depth;
    }
    let op = branches[rng.gen_range(0..branches.len())];
    out.push(op);
    let mut reached = depth;
    for &arg in &pset.signature(op).arg_kinds {
        reached = reached.max(grow(pset, rng, arg, depth + 1, min_height, max_height, out));
    }
    reached
}

/// Grow-style random subtree for a slot of kind `slot`, as a prefix
/// sequence, with height in `[min_height, max_height]`.
pub fn random_subtree<R: Rng + ?Sized>(
    pset: &PrimitiveSet,
    rng: &mut R,
    slot: ValueKind,
    min_height: usize,
    max_height: usize,
) -> Vec<u8> {
    assert!(min_height <= max_height, "min_height > max_height");
    let mut best: Vec<u8> = Vec::new();
    let mut best_height = 0;
    for _ in 0..MAX_ATTEMPTS {
        let mut out = Vec::new();
        let h = grow(pset, rng, slot, 0, min_height, max_height, &mut out);
        if h >= min_height {
            return out;
        }
        if best.is_empty() || h > best_height {
            best = out;
            best_height = h;
        }
    }
    // the slot kind cannot reach min_height (e.g. a leaf-only kind)
    best
}

/// A random kind-correct program rooted at the set's root kind.
pub fn random_program<R: Rng + ?Sized>(
    pset: &PrimitiveSet,
    rng: &mut R,
    min_height: usize,
    max_height: usize,
) -> ProgramTree {
    ProgramTree::from_prefix_unchecked(random_subtree(
        pset,
        rng,
        pset.root_kind(),
        min_height,
        max_height,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::default_primitive_set;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn heights_within_bounds_and_kind_correct() {
        let pset = default_primitive_set();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..10_000 {
            let t = random_program(&pset, &mut rng, 1, 4);
            t.validate(&pset).unwrap();
            let h = t.height(&pset);
            assert!((1..=4).contains(&h), "height {h}");
            assert!(t.len() > h);
        }
    }

    #[test]
    fn max_height_one() {
        let pset = default_primitive_set();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let t = random_program(&pset, &mut rng, 0, 1);
            assert!(t.height(&pset) <= 1);
            assert!(t.len() <= 4);
        }
    }

    #[test]
    fn deterministic_for_seed() {
        let pset = default_primitive_set();
        let a = random_program(&pset, &mut ChaCha8Rng::seed_from_u64(5), 2, 6);
        let b = random_program(&pset, &mut ChaCha8Rng::seed_from_u64(5), 2, 6);
        assert_eq!(a, b);
    }

    #[test]
    fn leaf_only_kind_returns_leaf() {
        let pset = default_primitive_set();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sub = random_subtree(&pset, &mut rng, ValueKind::RInteger, 2, 4);
        assert_eq!(sub.len(), 1);
    }
}
