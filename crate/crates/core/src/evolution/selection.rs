use rand::Rng;

use super::Individual;

/// Exponential fitness scaling: `e^(f * scale) - 1`.
pub fn transform_fitness(f: f64, scale: f64) -> f64 {
    (f * scale).exp() - 1.0
}

/// Stochastic universal sampling: `n` evenly spaced pointers over the
/// cumulative weights, offset by one random draw. Returns chosen indices in
/// ascending order. When no weight is positive every index gets weight 1.
pub fn sus_indices<R: Rng + ?Sized>(weights: &[f64], n: usize, rng: &mut R) -> Vec<usize> {
    assert!(!weights.is_empty(), "cannot select from an empty population");
    if n == 0 {
        return Vec::new();
    }
    let total: f64 = weights.iter().sum();
    let uniform;
    let weights = if total > 0.0 && total.is_finite() {
        weights
    } else {
        uniform = vec![1.0; weights.len()];
        &uniform[..]
    };
    let total: f64 = weights.iter().sum();
    let last = weights.iter().rposition(|&w| w > 0.0).expect("a positive weight");
    let step = total / n as f64;
    let start = rng.gen::<f64>() * step;
    let mut chosen = Vec::with_capacity(n);
    let mut i = 0;
    let mut cum = weights[0];
    for k in 0..n {
        let pointer = start + k as f64 * step;
        while pointer >= cum && i < last {
            i += 1;
            cum += weights[i];
        }
        chosen.push(i);
    }
    chosen
}

/// SUS over transformed fitness, cloning the chosen individuals.
pub fn sus_select<R: Rng + ?Sized>(
    individuals: &[Individual],
    n: usize,
    scale: f64,
    rng: &mut R,
) -> Vec<Individual> {
    let weights: Vec<f64> = individuals
        .iter()
        .map(|ind| transform_fitness(ind.cached_fitness(), scale))
        .collect();
    sus_indices(&weights, n, rng)
        .into_iter()
        .map(|i| individuals[i].clone())
        .collect()
}

/// `true` when `(fa, la)` beats `(fb, lb)`: higher fitness, then shorter.
pub fn better(fa: f64, la: usize, fb: f64, lb: usize) -> bool {
    fa > fb || (fa == fb && la < lb)
}

/// Index of the best individual by (fitness, then length), earliest on
/// full ties.
pub fn elite_index(scored: &[(f64, usize)]) -> usize {
    assert!(!scored.is_empty(), "elite of an empty population");
    let mut best = 0;
    for (i, &(f, l)) in scored.iter().enumerate().skip(1) {
        if better(f, l, scored[best].0, scored[best].1) {
            best = i;
        }
    }
    best
}

pub fn elite(individuals: &[Individual]) -> usize {
    let scored: Vec<(f64, usize)> = individuals
        .iter()
        .map(|ind| (ind.cached_fitness(), ind.length()))
        .collect();
    elite_index(&scored)
}

/// Indices kept by the length bound: everything no longer than the elite's
/// length plus `slack`.
pub fn length_bound_indices(scored: &[(f64, usize)], slack: usize) -> Vec<usize> {
    let reference = scored[elite_index(scored)].1;
    let cutoff = reference + slack;
    (0..scored.len()).filter(|&i| scored[i].1 <= cutoff).collect()
}

pub fn length_bound_filter(individuals: Vec<Individual>, slack: usize) -> Vec<Individual> {
    let scored: Vec<(f64, usize)> = individuals
        .iter()
        .map(|ind| (ind.cached_fitness(), ind.length()))
        .collect();
    let keep = length_bound_indices(&scored, slack);
    let mut keep = keep.into_iter().peekable();
    individuals
        .into_iter()
        .enumerate()
        .filter_map(|(i, ind)| {
            if keep.peek() == Some(&i) {
                keep.next();
                Some(ind)
            } else {
                None
            }
        })
        .collect()
}
