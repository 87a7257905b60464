//! Gaussian kernels on the linearization of `K(X, A)` and their bounds.
//!
//! A [`KernelConfig`] fixes a finite norming family `ℓ_n`, weights `w_n`, a
//! covariance spectrum `σ_n` and a bandwidth `t`. The kernel is the exact
//! Gaussian kernel of that finite-rank covariance.

mod certificate;
mod config;
mod family;
mod functional;
mod rayleigh;

pub use certificate::{
    code_length, mass_certificate, short_code_length, CertificateInstance, CertificateParams, CertificateReport,
    DEFAULT_LATTICE_NODE_CAP, MAX_CERTIFICATE_SUPPORT, MAX_MATERIALIZED_FUNCTIONALS,
};
pub use config::{KernelConfig, WeightScheme, DEFAULT_DIMENSION};
pub use family::default_norming_family;
pub use functional::{LipschitzFunctional, LIPSCHITZ_TOLERANCE};
pub use rayleigh::{rayleigh_compare, RayleighReport, SandwichCheck, MATCH_TOLERANCE, SANDWICH_TOLERANCE};

use crate::error::{Error, Result};
use crate::vpd::{covering_number, CoverMode, SignedDiagram};

/// Upper bound on `N_δ(S, ε)`: `N_ρ(S, ε / (√t (Σ σ_n w_n²)^{1/2}))`.
pub fn entropy_bound(config: &KernelConfig, points: &[SignedDiagram], epsilon: f64, mode: CoverMode) -> Result<usize> {
    if !(epsilon > 0.0) {
        return Err(Error::Argument(format!("epsilon must be positive, got {epsilon}")));
    }
    let factor = config.lipschitz_factor();
    if factor == 0.0 {
        if points.is_empty() {
            return Err(Error::Argument("covering number of an empty set".into()));
        }
        return Ok(1);
    }
    covering_number(points, epsilon / factor, mode)
}
