//! Covering numbers `N(S, ε)` with open balls centred at points of `S`.

use super::diagram::SignedDiagram;
use super::wasserstein::grothendieck_rho;
use crate::error::{Error, Result};

/// Exact set cover is exhaustive and limited to this many points.
pub const EXACT_COVER_LIMIT: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoverMode {
    /// Minimum cover over all subsets of centres.
    Exact,
    /// Farthest-first traversal; an upper bound on the exact value.
    Greedy,
}

/// `N_ρ(S, ε)` over signed diagrams, with ρ as the metric.
///
/// Greedy mode is seeded by the lexicographically smallest diagram.
pub fn covering_number(points: &[SignedDiagram], epsilon: f64, mode: CoverMode) -> Result<usize> {
    check_inputs(points.len(), epsilon, mode)?;
    let n = points.len();
    let mut dist = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = grothendieck_rho(&points[i], &points[j])?;
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    let seed = (0..n).min_by(|&a, &b| points[a].cmp(&points[b])).unwrap_or(0);
    covering_number_with(n, epsilon, mode, seed, |i, j| dist[i * n + j])
}

/// Covering number of `n` abstract points under `dist`.
///
/// `seed` is the first centre of the greedy traversal; exact mode ignores it.
pub fn covering_number_with<F>(n: usize, epsilon: f64, mode: CoverMode, seed: usize, dist: F) -> Result<usize>
where
    F: Fn(usize, usize) -> f64,
{
    check_inputs(n, epsilon, mode)?;
    if seed >= n {
        return Err(Error::Argument(format!("seed index {seed} out of range for {n} points")));
    }
    Ok(match mode {
        CoverMode::Exact => exact(n, epsilon, &dist),
        CoverMode::Greedy => greedy(n, epsilon, seed, &dist),
    })
}

fn check_inputs(n: usize, epsilon: f64, mode: CoverMode) -> Result<()> {
    if !(epsilon > 0.0) {
        return Err(Error::Argument(format!("epsilon must be positive, got {epsilon}")));
    }
    if n == 0 {
        return Err(Error::Argument("covering number of an empty set".into()));
    }
    if mode == CoverMode::Exact && n > EXACT_COVER_LIMIT {
        return Err(Error::Capacity(format!(
            "exact cover supports at most {EXACT_COVER_LIMIT} points, got {n}; use greedy mode"
        )));
    }
    Ok(())
}

fn exact(n: usize, epsilon: f64, dist: &impl Fn(usize, usize) -> f64) -> usize {
    let balls: Vec<u32> = (0..n)
        .map(|c| (0..n).filter(|&x| dist(c, x) < epsilon).fold(0u32, |m, x| m | (1 << x)))
        .collect();
    let full = (1u32 << n) - 1;
    let mut covered = vec![0u32; 1 << n];
    let mut best = n;
    for mask in 1u32..=full {
        let low = mask.trailing_zeros() as usize;
        covered[mask as usize] = covered[(mask & (mask - 1)) as usize] | balls[low];
        if covered[mask as usize] == full {
            best = best.min(mask.count_ones() as usize);
        }
    }
    best
}

fn greedy(n: usize, epsilon: f64, seed: usize, dist: &impl Fn(usize, usize) -> f64) -> usize {
    let mut nearest: Vec<f64> = (0..n).map(|x| dist(seed, x)).collect();
    let mut centres = 1;
    loop {
        // farthest point from the current centres; first index wins ties
        let (far, gap) = nearest
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc });
        if gap < epsilon {
            return centres;
        }
        centres += 1;
        for (x, slot) in nearest.iter_mut().enumerate() {
            *slot = slot.min(dist(far, x));
        }
    }
}
