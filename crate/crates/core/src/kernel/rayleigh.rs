//! Empirical comparison of two seminorm quadratic forms `q₁, q₂`.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use super::config::KernelConfig;
use crate::error::{Error, Result};
use crate::metric::BirthDeath;
use crate::vpd::SignedDiagram;

/// Forms at or below this (relative to the sample scale) count as zero.
const NULL_TOLERANCE: f64 = 1e-24;
/// Absolute tolerance for `q₁ = q₂`.
pub const MATCH_TOLERANCE: f64 = 1e-10;
/// Relative eigenvalue cutoff defining the range of a Gram form.
const RANGE_TOLERANCE: f64 = 1e-12;
/// Relative slack when checking held-out sandwiches.
pub const SANDWICH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RayleighReport {
    /// `min q₂/q₁` over sample differences with `q₁ > 0`.
    pub alpha_hat: f64,
    /// `max q₂/q₁` over the same differences.
    pub beta_hat: f64,
    /// `|q₁ - q₂| ≤ 1e-10` on every sample difference.
    pub kernels_match: bool,
    /// `q₁ = 0 ⟺ q₂ = 0` on every sample difference.
    pub null_spaces_match: bool,
    pub compared: usize,
    /// Exact `inf q₂/q₁` over all real combinations of the pooled support.
    pub span_alpha: f64,
    /// Exact `sup q₂/q₁` over the same span; infinite if `ker q₁ ⊄ ker q₂`.
    pub span_beta: f64,
    pub pool: Vec<BirthDeath>,
}

/// Counts of held-out differences falling outside each sandwich.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SandwichCheck {
    pub checked: usize,
    pub span_violations: usize,
    pub sample_violations: usize,
}

fn differences(sample: &[SignedDiagram]) -> Result<Vec<SignedDiagram>> {
    let mut out = Vec::with_capacity(sample.len() * (sample.len() + 1) / 2);
    for (i, g) in sample.iter().enumerate() {
        out.push(g.clone());
        for h in &sample[i + 1..] {
            out.push(g.checked_sub(h)?);
        }
    }
    Ok(out)
}

/// Compares `q₁` and `q₂` on the sample and on the span of its support.
pub fn rayleigh_compare(c1: &KernelConfig, c2: &KernelConfig, sample: &[SignedDiagram]) -> Result<RayleighReport> {
    c1.space().ensure_same(&c2.space())?;
    if sample.is_empty() {
        return Err(Error::Argument("empty comparison sample".into()));
    }
    let diffs = differences(sample)?;
    let q1: Vec<f64> = diffs.iter().map(|x| c1.embedding_norm_sq(x)).collect::<Result<_>>()?;
    let q2: Vec<f64> = diffs.iter().map(|x| c2.embedding_norm_sq(x)).collect::<Result<_>>()?;
    let scale = q1.iter().chain(&q2).fold(1.0f64, |m, q| m.max(*q));
    let is_null = |q: f64| q <= NULL_TOLERANCE * scale;

    let (mut alpha, mut beta, mut compared) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
    let (mut matches, mut nulls) = (true, true);
    for (&a, &b) in q1.iter().zip(&q2) {
        matches &= (a - b).abs() <= MATCH_TOLERANCE;
        nulls &= is_null(a) == is_null(b);
        if !is_null(a) {
            let r = b / a;
            alpha = alpha.min(r);
            beta = beta.max(r);
            compared += 1;
        }
    }
    if compared == 0 {
        return Err(Error::Degenerate("q₁ vanishes on every sample difference".into()));
    }

    let mut pool: Vec<BirthDeath> = sample.iter().flat_map(|g| g.support().cloned()).collect();
    pool.sort();
    pool.dedup();
    let a1 = pool_form(c1, &pool);
    let a2 = pool_form(c2, &pool);
    let span_beta = sup_ratio(&a2, &a1);
    let inv = sup_ratio(&a1, &a2);
    let span_alpha = if inv > 0.0 { 1.0 / inv } else { f64::INFINITY };

    Ok(RayleighReport {
        alpha_hat: alpha,
        beta_hat: beta,
        kernels_match: matches,
        null_spaces_match: nulls,
        compared,
        span_alpha: span_alpha.min(alpha),
        span_beta: span_beta.max(beta),
        pool,
    })
}

impl RayleighReport {
    /// Checks `α q₁ ≤ q₂ ≤ β q₁` on held-out differences supported on the pool,
    /// once for the span bounds and once for the sample bounds.
    pub fn check_sandwich(
        &self,
        c1: &KernelConfig,
        c2: &KernelConfig,
        held_out: &[SignedDiagram],
    ) -> Result<SandwichCheck> {
        for g in held_out {
            if let Some(p) = g.support().find(|p| self.pool.binary_search(p).is_err()) {
                return Err(Error::Argument(format!("held-out point {p} is outside the comparison pool")));
            }
        }
        let mut check = SandwichCheck {
            checked: 0,
            span_violations: 0,
            sample_violations: 0,
        };
        for x in differences(held_out)? {
            let (a, b) = (c1.embedding_norm_sq(&x)?, c2.embedding_norm_sq(&x)?);
            let slack = SANDWICH_TOLERANCE * a.max(b) + 1e-300;
            let outside = |lo: f64, hi: f64| b < lo * a - slack || b > hi * a + slack;
            check.checked += 1;
            if outside(self.span_alpha, self.span_beta) {
                check.span_violations += 1;
            }
            if outside(self.alpha_hat, self.beta_hat) {
                check.sample_violations += 1;
            }
        }
        Ok(check)
    }
}

/// Gram matrix of the form on the pool: `A_ij = Σ σ_n w_n² ℓ_n(p_i) ℓ_n(p_j)`.
fn pool_form(config: &KernelConfig, pool: &[BirthDeath]) -> DMatrix<f64> {
    let space = config.space();
    let m = pool.len();
    let n = config.dimension();
    let coeff: Vec<f64> = config
        .weights()
        .iter()
        .zip(config.spectrum())
        .map(|(w, s)| (s * w * w).sqrt())
        .collect();
    let f = DMatrix::from_fn(n, m, |k, j| coeff[k] * config.functionals()[k].evaluate_point(&space, &pool[j]));
    f.transpose() * f
}

/// `sup xᵀAx / xᵀBx` over `x` with `xᵀBx > 0`; infinite when `ker B ⊄ ker A`.
fn sup_ratio(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let eig = SymmetricEigen::new(b.clone());
    let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(*v));
    if top <= 0.0 {
        return f64::INFINITY;
    }
    let cutoff = RANGE_TOLERANCE * top;
    let range: Vec<usize> = (0..b.nrows()).filter(|&i| eig.eigenvalues[i] > cutoff).collect();
    let kernel: Vec<usize> = (0..b.nrows()).filter(|&i| eig.eigenvalues[i] <= cutoff).collect();
    let a_scale = a.amax().max(f64::MIN_POSITIVE);
    for &k in &kernel {
        let v = eig.eigenvectors.column(k);
        if (v.transpose() * a * v)[(0, 0)] > RANGE_TOLERANCE.sqrt() * a_scale {
            return f64::INFINITY;
        }
    }
    let w = DMatrix::from_fn(b.nrows(), range.len(), |i, c| {
        eig.eigenvectors[(i, range[c])] / eig.eigenvalues[range[c]].sqrt()
    });
    let mut m = w.transpose() * a * &w;
    // symmetrize against rounding before the second decomposition
    m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(*v))
}
