//! Mass certificates from a dedicated lattice family of functionals.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::config::KernelConfig;
use super::functional::LipschitzFunctional;
use crate::error::{Error, Result};
use crate::metric::{BirthDeath, BirthDeathSpace, MetricPair};
use crate::vpd::SignedDiagram;

/// Largest support the lattice enumeration accepts.
pub const MAX_CERTIFICATE_SUPPORT: usize = 6;
/// Default cap on enumeration nodes (partial assignments).
pub const DEFAULT_LATTICE_NODE_CAP: usize = 2_000_000;
/// Cap on lattice members turned into explicit functionals.
pub const MAX_MATERIALIZED_FUNCTIONALS: usize = 200_000;

/// Grid membership slack, in units of Δ.
const GRID_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    /// Slack `ε ∈ (0, 1)`.
    pub epsilon: f64,
    /// Code exponent `δ ∈ (0, 1)`.
    pub code_exponent: f64,
    /// Bandwidth `t > 0`.
    pub t: f64,
}

impl Default for CertificateParams {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            code_exponent: 0.05,
            t: 1.0,
        }
    }
}

/// Prefix-free code length of a lattice vector `v = Δ·m`:
/// `Σ (2 + 2⌊log₂(1 + |m_x|)⌋)`.
///
/// Sending `|m|` as an Elias-gamma-style word plus a sign bit gives exactly
/// these lengths, and the per-coordinate Kraft sum is `3/4`.
pub fn code_length(ms: &[i64]) -> u32 {
    ms.iter().map(|&m| 2 + 2 * floor_log2_1p(m)).sum()
}

/// The variant `Σ (2 + ⌊log₂(1 + |m_x|)⌋)` with a single magnitude term.
///
/// Its Kraft sum exceeds 1 (it is 31/16 for one coordinate), so no
/// prefix-free code has these lengths. Kept for the report only.
pub fn short_code_length(ms: &[i64]) -> u32 {
    ms.iter().map(|&m| 2 + floor_log2_1p(m)).sum()
}

fn floor_log2_1p(m: i64) -> u32 {
    63 - (m.unsigned_abs() + 1).leading_zeros()
}

/// A target `g` with basepoint-separated sign pattern, ready for enumeration.
#[derive(Debug, Clone)]
pub struct CertificateInstance {
    target: SignedDiagram,
    params: CertificateParams,
    support: Arc<[BirthDeath]>,
    multiplicities: Vec<i64>,
    radii: Vec<f64>,
    pairwise: Vec<f64>,
    grid: f64,
    witness: Vec<i64>,
    node_cap: usize,
}

/// Everything computed while evaluating a certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub mass: f64,
    /// `Δ(S, g, ε)`.
    pub grid: f64,
    pub support_size: usize,
    pub lattice_size: usize,
    pub kraft_sum: f64,
    pub short_code_kraft_sum: f64,
    pub weight_sq_sum: f64,
    pub spectrum_sum: f64,
    /// `log(1/k(g, 0))` over the certificate family.
    pub log_inv_kernel: f64,
    pub kernel_value: f64,
    pub witness: Vec<i64>,
    pub witness_code_length: u32,
    pub witness_in_lattice: bool,
    /// `2^{-(2+3δ)L(v_Δ)}`.
    pub witness_factor: f64,
    /// `max_{v ∈ V} 2^{-(2+3δ)L(v)}`.
    pub max_factor: f64,
    /// Returned bound, normalized at the rounded witness `v_Δ`.
    pub bound: f64,
    /// The same expression normalized by `max_factor`.
    pub lattice_max_rhs: f64,
    pub epsilon: f64,
    pub code_exponent: f64,
    pub t: f64,
}

impl CertificateInstance {
    pub fn new(target: SignedDiagram, params: CertificateParams) -> Result<Self> {
        let CertificateParams { epsilon, code_exponent, t } = params;
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Argument(format!("slack epsilon must lie in (0, 1), got {epsilon}")));
        }
        if !(code_exponent > 0.0 && code_exponent < 1.0) {
            return Err(Error::Argument(format!("code exponent must lie in (0, 1), got {code_exponent}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Argument(format!("bandwidth t must be positive, got {t}")));
        }
        if target.is_zero() {
            return Err(Error::Precondition("certificate target must be nonzero".into()));
        }
        let s = target.support_len();
        if s > MAX_CERTIFICATE_SUPPORT {
            return Err(Error::Capacity(format!(
                "support of size {s} exceeds the lattice enumeration cap of {MAX_CERTIFICATE_SUPPORT}"
            )));
        }
        let space = target.space();
        let support: Vec<BirthDeath> = target.support().cloned().collect();
        let multiplicities: Vec<i64> = target.entries().iter().map(|(_, n)| *n).collect();
        let radii: Vec<f64> = support.iter().map(|p| space.distance_to_diagonal(p)).collect();
        let mut pairwise = vec![0.0; s * s];
        for i in 0..s {
            for j in (i + 1)..s {
                let d = space.strengthened_distance(&support[i], &support[j]);
                pairwise[i * s + j] = d;
                pairwise[j * s + i] = d;
                let opposite = multiplicities[i].signum() != multiplicities[j].signum();
                let reach = radii[i] + radii[j];
                if opposite && d < reach * (1.0 - 1e-12) {
                    return Err(Error::Precondition(format!(
                        "sign pattern is not basepoint-separated: d₁({}, {}) = {d} < {reach}",
                        support[i], support[j]
                    )));
                }
            }
        }
        let f0: Vec<f64> = (0..s).map(|i| multiplicities[i].signum() as f64 * radii[i]).collect();
        let shrink = 1.0 - epsilon;
        let mut gap = f64::INFINITY;
        for i in 0..s {
            gap = gap.min(radii[i] - shrink * f0[i].abs());
            for j in (i + 1)..s {
                gap = gap.min(pairwise[i * s + j] - shrink * (f0[i] - f0[j]).abs());
            }
        }
        let grid = 0.5 * gap;
        if !(grid > 0.0 && grid.is_finite()) {
            return Err(Error::Degenerate(format!("grid spacing Δ = {grid} is not positive")));
        }
        let witness = f0.iter().map(|f| (shrink * f / grid).round() as i64).collect();
        Ok(Self {
            target,
            params,
            support: Arc::from(support),
            multiplicities,
            radii,
            pairwise,
            grid,
            witness,
            node_cap: DEFAULT_LATTICE_NODE_CAP,
        })
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }

    pub fn target(&self) -> &SignedDiagram {
        &self.target
    }

    pub fn params(&self) -> CertificateParams {
        self.params
    }

    /// `Δ(S, g, ε)`.
    pub fn grid(&self) -> f64 {
        self.grid
    }

    /// Lattice coordinates of `v_Δ`, the rounding of `(1 - ε) f₀` to `Δ·ℤ`.
    pub fn witness(&self) -> &[i64] {
        &self.witness
    }

    pub fn support(&self) -> &[BirthDeath] {
        &self.support
    }

    /// Visits every `m` with `v = Δ·m ∈ V(S, g, ε)`; returns the node count.
    ///
    /// Each constraint is an interval for the next coordinate, so the
    /// feasible range is their intersection and no leaf is ever rejected.
    pub fn enumerate(&self, mut visit: impl FnMut(&[i64])) -> Result<usize> {
        let s = self.support.len();
        let mut ms = vec![0i64; s];
        let mut nodes = 0usize;
        self.descend(0, &mut ms, &mut nodes, &mut visit)?;
        Ok(nodes)
    }

    fn descend(&self, i: usize, ms: &mut Vec<i64>, nodes: &mut usize, visit: &mut impl FnMut(&[i64])) -> Result<()> {
        let s = self.support.len();
        if i == s {
            visit(ms);
            return Ok(());
        }
        let (mut lo, mut hi) = (-self.radii[i], self.radii[i]);
        for j in 0..i {
            let centre = ms[j] as f64 * self.grid;
            let d = self.pairwise[i * s + j];
            lo = lo.max(centre - d);
            hi = hi.min(centre + d);
        }
        let m_lo = (lo / self.grid - GRID_SLACK).ceil() as i64;
        let m_hi = (hi / self.grid + GRID_SLACK).floor() as i64;
        for m in m_lo..=m_hi {
            *nodes += 1;
            if *nodes > self.node_cap {
                return Err(Error::Capacity(format!(
                    "lattice enumeration exceeded {} nodes (Δ = {:.3e})",
                    self.node_cap, self.grid
                )));
            }
            ms[i] = m;
            self.descend(i + 1, ms, nodes, visit)?;
        }
        Ok(())
    }

    fn factor(&self, length: u32) -> f64 {
        2f64.powf(-(2.0 + 3.0 * self.params.code_exponent) * length as f64)
    }

    /// Right-hand side of the certificate inequality for a given
    /// `log(1/k(g, 0))` and normalizing factor.
    pub fn rhs(&self, log_inv_kernel: f64, factor: f64) -> f64 {
        let CertificateParams { epsilon, t, .. } = self.params;
        let slack = 0.5 * self.grid * self.target.total_multiplicity() as f64;
        ((2.0 / t) * log_inv_kernel.max(0.0) / factor).sqrt() / (1.0 - epsilon) + slack / (1.0 - epsilon)
    }

    /// The bound with the witness normalization, for an externally estimated
    /// `log(1/k(g, 0))`.
    pub fn bound_from_log_inv_kernel(&self, log_inv_kernel: f64) -> f64 {
        self.rhs(log_inv_kernel, self.factor(code_length(&self.witness)))
    }

    pub fn evaluate(&self) -> Result<CertificateReport> {
        let delta = self.params.code_exponent;
        let mut lattice_size = 0usize;
        let (mut kraft, mut short_kraft, mut wsq, mut sig, mut q) = (0.0, 0.0, 0.0, 0.0, 0.0);
        let mut max_factor: f64 = 0.0;
        let mut witness_in_lattice = false;
        self.enumerate(|ms| {
            lattice_size += 1;
            let l = code_length(ms) as f64;
            kraft += 2f64.powf(-l);
            short_kraft += 2f64.powf(-(short_code_length(ms) as f64));
            wsq += 2f64.powf(-(1.0 + 2.0 * delta) * l);
            sig += 2f64.powf(-(1.0 + delta) * l);
            let factor = 2f64.powf(-(2.0 + 3.0 * delta) * l);
            max_factor = max_factor.max(factor);
            let lin: f64 = ms
                .iter()
                .zip(&self.multiplicities)
                .map(|(m, n)| (*m as f64 * self.grid) * *n as f64)
                .sum();
            q += factor * lin * lin;
            if ms == self.witness.as_slice() {
                witness_in_lattice = true;
            }
        })?;
        let log_inv_kernel = 0.5 * self.params.t * q;
        let witness_code_length = code_length(&self.witness);
        let witness_factor = self.factor(witness_code_length);
        Ok(CertificateReport {
            mass: self.target.mass(),
            grid: self.grid,
            support_size: self.support.len(),
            lattice_size,
            kraft_sum: kraft,
            short_code_kraft_sum: short_kraft,
            weight_sq_sum: wsq,
            spectrum_sum: sig,
            log_inv_kernel,
            kernel_value: (-log_inv_kernel).exp(),
            witness: self.witness.clone(),
            witness_code_length,
            witness_in_lattice,
            witness_factor,
            max_factor,
            bound: self.rhs(log_inv_kernel, witness_factor),
            lattice_max_rhs: self.rhs(log_inv_kernel, max_factor),
            epsilon: self.params.epsilon,
            code_exponent: delta,
            t: self.params.t,
        })
    }

    /// Lattice members as coordinate vectors.
    pub fn lattice(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        let mut overflow = false;
        self.enumerate(|ms| {
            if out.len() < MAX_MATERIALIZED_FUNCTIONALS {
                out.push(ms.to_vec());
            } else {
                overflow = true;
            }
        })?;
        if overflow {
            return Err(Error::Capacity(format!(
                "lattice has more than {MAX_MATERIALIZED_FUNCTIONALS} members"
            )));
        }
        Ok(out)
    }

    /// The certificate family `{ℓ_v}` with `w(v) = 2^{-(1/2+δ)L(v)}` and
    /// `σ(v) = 2^{-(1+δ)L(v)}` as an explicit kernel configuration.
    pub fn kernel_config(&self) -> Result<KernelConfig> {
        let delta = self.params.code_exponent;
        let lattice = self.lattice()?;
        let mut functionals = Vec::with_capacity(lattice.len());
        let mut weights = Vec::with_capacity(lattice.len());
        let mut spectrum = Vec::with_capacity(lattice.len());
        for ms in &lattice {
            let l = code_length(ms) as f64;
            let values = ms.iter().map(|m| *m as f64 * self.grid).collect();
            functionals.push(LipschitzFunctional::new_unchecked(self.support.clone(), values)?);
            weights.push(2f64.powf(-(0.5 + delta) * l));
            spectrum.push(2f64.powf(-(1.0 + delta) * l));
        }
        KernelConfig::explicit(self.target.space(), self.params.t, functionals, weights, spectrum)
    }

    pub fn space(&self) -> BirthDeathSpace {
        self.target.space()
    }
}

/// Evaluates the certificate and returns its bound on `M(g)`.
pub fn mass_certificate(target: &SignedDiagram, params: CertificateParams) -> Result<f64> {
    Ok(CertificateInstance::new(target.clone(), params)?.evaluate()?.bound)
}
