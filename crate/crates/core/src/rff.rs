//! Random Fourier features for the Gaussian kernel of a [`KernelConfig`].
//!
//! Sample `r` draws `u_{r,n} = √σ_n · z` with `z` the standard normal at
//! counter `n` of substream `r`, so draws do not depend on evaluation order.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{CertificateInstance, KernelConfig};
use crate::rng::CounterRng;
use crate::vpd::{covering_number, CoverMode, SignedDiagram};

/// Stream tag separating feature draws from other users of a seed.
pub const FEATURE_STREAM: u64 = 0x5246_4600;

/// `R` independent draws from the Gaussian measure with covariance `diag(σ_n)`.
#[derive(Debug, Clone)]
pub struct FeatureSample {
    config: KernelConfig,
    draws: usize,
    seed: u64,
    coords: Vec<f64>,
    norms_sq: Vec<f64>,
}

impl FeatureSample {
    pub fn draw(config: &KernelConfig, draws: usize, seed: u64) -> Result<Self> {
        if draws == 0 {
            return Err(Error::Argument("number of features R must be positive".into()));
        }
        let n = config.dimension();
        let scale: Vec<f64> = config.spectrum().iter().map(|s| s.sqrt()).collect();
        let base = CounterRng::new(seed, FEATURE_STREAM);
        let mut coords = Vec::with_capacity(draws * n);
        let mut norms_sq = Vec::with_capacity(draws);
        for r in 0..draws {
            let stream = base.substream(r as u64);
            let start = coords.len();
            coords.extend((0..n).map(|k| scale[k] * stream.normal_at(k as u64)));
            norms_sq.push(coords[start..].iter().map(|x| x * x).sum());
        }
        Ok(Self {
            config: config.clone(),
            draws,
            seed,
            coords,
            norms_sq,
        })
    }

    pub fn config(&self) -> &KernelConfig {
        &self.config
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `u_r` as a slice of length `N`.
    pub fn sample(&self, r: usize) -> &[f64] {
        let n = self.config.dimension();
        &self.coords[r * n..(r + 1) * n]
    }

    /// `‖u_r‖²` for every draw.
    pub fn norms_sq(&self) -> &[f64] {
        &self.norms_sq
    }

    /// Phases `θ_r = √t ⟨J x, u_r⟩` from functional values `x_n = ℓ_n(g)`.
    pub fn phases_from_values(&self, values: &[f64]) -> Vec<f64> {
        let root_t = self.config.t().sqrt();
        let jx: Vec<f64> = values.iter().zip(self.config.weights()).map(|(x, w)| w * x).collect();
        (0..self.draws)
            .map(|r| root_t * self.sample(r).iter().zip(&jx).map(|(u, j)| u * j).sum::<f64>())
            .collect()
    }

    pub fn phases(&self, g: &SignedDiagram) -> Result<Vec<f64>> {
        Ok(self.phases_from_values(&self.config.functional_values(g)?))
    }

    /// `Φ_R(g)_r = R^{-1/2} e^{iθ_r(g)}`.
    pub fn feature_map(&self, g: &SignedDiagram) -> Result<Vec<Complex64>> {
        let norm = (self.draws as f64).sqrt().recip();
        Ok(self
            .phases(g)?
            .into_iter()
            .map(|th| Complex64::from_polar(norm, th))
            .collect())
    }

    /// `k̂_R` from the functional values of a difference `g - h`.
    pub fn empirical_kernel_from_values(&self, values: &[f64]) -> Complex64 {
        let sum: Complex64 = self
            .phases_from_values(values)
            .into_iter()
            .map(|th| Complex64::from_polar(1.0, th))
            .sum();
        sum / self.draws as f64
    }

    /// `k̂_R(g, h) = (1/R) Σ_r e^{i√t ⟨J(g - h), u_r⟩}`.
    pub fn empirical_kernel(&self, g: &SignedDiagram, h: &SignedDiagram) -> Result<Complex64> {
        let diff = g.checked_sub(h)?;
        Ok(self.empirical_kernel_from_values(&self.config.functional_values(&diff)?))
    }

    /// `(1/R) Σ_r ‖u_r‖²`.
    pub fn mean_norm_sq(&self) -> f64 {
        self.norms_sq.iter().sum::<f64>() / self.draws as f64
    }

    /// `√t (Σ w_n²)^{1/2} ((1/R) Σ_r ‖u_r‖²)^{1/2}`, using `‖J‖ ≤ (Σ w_n²)^{1/2}`.
    pub fn empirical_lipschitz_bound(&self) -> f64 {
        (self.config.t() * self.config.weight_norm_sq() * self.mean_norm_sq()).sqrt()
    }
}

/// `ε̂ = √((4/R) ln(4|S|²/δ))`, the deviation at which the uniform
/// concentration bound over `S × S` equals `δ`.
pub fn hoeffding_epsilon(draws: usize, failure_prob: f64, set_size: usize) -> Result<f64> {
    if !(failure_prob > 0.0 && failure_prob < 1.0) {
        return Err(Error::Argument(format!("failure probability must lie in (0, 1), got {failure_prob}")));
    }
    if draws == 0 || set_size == 0 {
        return Err(Error::Argument("R and |S| must be positive".into()));
    }
    let s = set_size as f64;
    Ok(((4.0 / draws as f64) * (4.0 * s * s / failure_prob).ln()).sqrt())
}

/// Outcome of the sampled mass certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RffMassBound {
    Bound { value: f64, re_kernel: f64 },
    /// `Re k̂_R(g, 0) < 2ε̂`: the estimate is too close to zero to use.
    Abstain { re_kernel: f64 },
}

impl RffMassBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Bound { value, .. } => Some(*value),
            Self::Abstain { .. } => None,
        }
    }
}

/// The certificate bound with `log(1/k(g, 0))` replaced by
/// `log(1/(Re k̂_R(g, 0) - ε̂))`.
///
/// `sample` must be drawn over the instance's own family
/// ([`CertificateInstance::kernel_config`]).
pub fn rff_mass_bound(sample: &FeatureSample, instance: &CertificateInstance, eps_hat: f64) -> Result<RffMassBound> {
    if !(eps_hat > 0.0 && eps_hat < 1.0) {
        return Err(Error::Argument(format!("eps_hat must lie in (0, 1), got {eps_hat}")));
    }
    let g = instance.target();
    let re = sample
        .empirical_kernel(g, &SignedDiagram::zero(g.space()))?
        .re;
    if re < 2.0 * eps_hat {
        return Ok(RffMassBound::Abstain { re_kernel: re });
    }
    let log_inv = -(re - eps_hat).ln();
    Ok(RffMassBound::Bound {
        value: instance.bound_from_log_inv_kernel(log_inv),
        re_kernel: re,
    })
}

/// Upper bound on the covering number of `Φ_R(S)` at scale `ε`:
/// `N_ρ(S, ε / Lip)`, or 1 when the empirical Lipschitz bound vanishes.
pub fn rff_entropy_transfer(
    sample: &FeatureSample,
    points: &[SignedDiagram],
    epsilon: f64,
    mode: CoverMode,
) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(Error::Argument(format!("epsilon must be positive, got {epsilon}")));
    }
    if points.is_empty() {
        return Err(Error::Argument("covering number of an empty set".into()));
    }
    let lip = sample.empirical_lipschitz_bound();
    if lip == 0.0 {
        return Ok(1);
    }
    covering_number(points, epsilon / lip, mode)
}
