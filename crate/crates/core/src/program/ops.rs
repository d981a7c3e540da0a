use rand::Rng;

use super::generate::random_subtree;
use super::primitive::PrimitiveSet;
use super::tree::ProgramTree;

/// Replaces a uniformly chosen node with a fresh random subtree of a kind
/// its slot accepts.
pub fn mutate_subtree<R: Rng + ?Sized>(
    tree: &ProgramTree,
    pset: &PrimitiveSet,
    rng: &mut R,
    max_subtree_height: usize,
) -> ProgramTree {
    let index = rng.gen_range(0..tree.len());
    mutate_at(tree, pset, rng, index, max_subtree_height)
}

/// Subtree mutation at a fixed node position.
pub fn mutate_at<R: Rng + ?Sized>(
    tree: &ProgramTree,
    pset: &PrimitiveSet,
    rng: &mut R,
    index: usize,
    max_subtree_height: usize,
) -> ProgramTree {
    let slot = tree.slot_kinds(pset)[index];
    let end = tree.subtree_end(index, pset);
    let fresh = random_subtree(pset, rng, slot, 0, max_subtree_height);
    tree.splice(index, end, &fresh)
}

/// One-point subtree crossover. A node is drawn uniformly in `a`, then a
/// node of `b` that can trade places with it in both directions. When `b`
/// has no such node the parents come back unchanged.
pub fn crossover_subtrees<R: Rng + ?Sized>(
    a: &ProgramTree,
    b: &ProgramTree,
    pset: &PrimitiveSet,
    rng: &mut R,
) -> (ProgramTree, ProgramTree) {
    let i = rng.gen_range(0..a.len());
    let slots_a = a.slot_kinds(pset);
    let slots_b = b.slot_kinds(pset);
    let ret_a = pset.signature(a.nodes()[i]).return_kind;
    let candidates: Vec<usize> = (0..b.len())
        .filter(|&j| {
            let ret_b = pset.signature(b.nodes()[j]).return_kind;
            slots_a[i].accepts(ret_b) && slots_b[j].accepts(ret_a)
        })
        .collect();
    if candidates.is_empty() {
        return (a.clone(), b.clone());
    }
    let j = candidates[rng.gen_range(0..candidates.len())];
    swap_subtrees(a, b, pset, i, j)
}

/// Exchanges the subtree at `i` in `a` with the subtree at `j` in `b`.
/// The caller guarantees kind compatibility.
pub(crate) fn swap_subtrees(
    a: &ProgramTree,
    b: &ProgramTree,
    pset: &PrimitiveSet,
    i: usize,
    j: usize,
) -> (ProgramTree, ProgramTree) {
    let end_a = a.subtree_end(i, pset);
    let end_b = b.subtree_end(j, pset);
    (
        a.splice(i, end_a, &b.nodes()[j..end_b]),
        b.splice(j, end_b, &a.nodes()[i..end_a]),
    )
}
