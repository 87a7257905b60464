//! Run configuration: a JSON file whose every field has a default.
//!
//! Defaults reproduce the reference setting: a Watts–Strogatz graph with
//! `n = 30, k = 4, p = 0.3`, 128 norming functionals, `t = 1`, `R = 100`
//! features and failure probability `0.05`. The default seed is one for
//! which every labeling yields a nonempty diagram.

use std::path::Path;

use serde::{Deserialize, Serialize};
use vpdk::kernel::{CertificateParams, DEFAULT_DIMENSION};
use vpdk::topology::LabelingKind;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub graph: GraphConfig,
    pub variants: Vec<LabelingKind>,
    /// Sample count for function-valued labels.
    pub grid: usize,
    pub persistence: PersistenceConfig,
    pub kernel: KernelParams,
    pub rff: RffParams,
    pub certificate: CertificateConfig,
    pub perturbation: PerturbationConfig,
    pub entropy_epsilons: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GraphConfig {
    pub n: usize,
    pub k: usize,
    pub p: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PersistenceConfig {
    /// Keep pairs whose birth and death scalars tie. On by default: with
    /// poset labels such pairs can still be off the diagonal of `P²`, and true
    /// diagonal points are removed when the diagram is extracted.
    pub keep_zero_persistence: bool,
}

impl Default for PersistenceConfig {
    fn default() -> Self {
        Self {
            keep_zero_persistence: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeConfig {
    Geometric,
    Explicit { weights: Vec<f64>, spectrum: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KernelParams {
    pub dimension: usize,
    pub t: f64,
    pub scheme: SchemeConfig,
    pub family_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RffParams {
    pub draws: usize,
    pub failure_prob: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertificateConfig {
    pub epsilon: f64,
    pub code_exponent: f64,
    /// How many of the longest-lived points get a singleton certificate.
    pub singletons: usize,
    /// Also certify the sum of the two longest-lived points.
    pub include_pair: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbationConfig {
    /// Perturbation level as a multiple of the mean lifetime.
    pub factor: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            graph: GraphConfig::default(),
            variants: LabelingKind::ALL.to_vec(),
            grid: 32,
            persistence: PersistenceConfig::default(),
            kernel: KernelParams::default(),
            rff: RffParams::default(),
            certificate: CertificateConfig::default(),
            perturbation: PerturbationConfig::default(),
            entropy_epsilons: vec![0.05, 0.1, 0.25, 0.5, 1.0],
        }
    }
}

impl Default for GraphConfig {
    fn default() -> Self {
        Self {
            n: 30,
            k: 4,
            p: 0.3,
            seed: 1478,
        }
    }
}

impl Default for KernelParams {
    fn default() -> Self {
        Self {
            dimension: DEFAULT_DIMENSION,
            t: 1.0,
            scheme: SchemeConfig::Geometric,
            family_seed: 1478,
        }
    }
}

impl Default for RffParams {
    fn default() -> Self {
        Self {
            draws: 100,
            failure_prob: 0.05,
            seed: 1478,
        }
    }
}

impl Default for CertificateConfig {
    fn default() -> Self {
        let p = CertificateParams::default();
        Self {
            epsilon: p.epsilon,
            code_exponent: p.code_exponent,
            singletons: 3,
            include_pair: true,
        }
    }
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        Self {
            factor: 0.1,
            replicates: 7,
            seed: 1478,
        }
    }
}

fn open_unit(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(CliError::Input(format!("{name} must lie in (0, 1), got {x}")))
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let config: Self = serde_json::from_str(&text).map_err(|source| CliError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Replaces every seed with `seed`.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.graph.seed = seed;
        self.kernel.family_seed = seed;
        self.rff.seed = seed;
        self.perturbation.seed = seed;
        self
    }

    pub fn certificate_params(&self) -> CertificateParams {
        CertificateParams {
            epsilon: self.certificate.epsilon,
            code_exponent: self.certificate.code_exponent,
            t: self.kernel.t,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        if !(g.k >= 2 && g.k % 2 == 0 && g.n > g.k) {
            return Err(CliError::Input(format!(
                "graph needs n > k >= 2 with k even, got n={}, k={}",
                g.n, g.k
            )));
        }
        if !(0.0..=1.0).contains(&g.p) {
            return Err(CliError::Input(format!("graph.p must lie in [0, 1], got {}", g.p)));
        }
        if self.variants.is_empty() {
            return Err(CliError::Input("at least one variant is required".into()));
        }
        let mut seen = self.variants.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.variants.len() {
            return Err(CliError::Input("variants must be distinct".into()));
        }
        if self.grid < 2 {
            return Err(CliError::Input(format!("grid must be at least 2, got {}", self.grid)));
        }
        let k = &self.kernel;
        if k.dimension == 0 {
            return Err(CliError::Input("kernel.dimension must be positive".into()));
        }
        if !(k.t > 0.0 && k.t.is_finite()) {
            return Err(CliError::Input(format!("kernel.t must be positive, got {}", k.t)));
        }
        if let SchemeConfig::Explicit { weights, spectrum } = &k.scheme {
            if weights.len() != k.dimension || spectrum.len() != k.dimension {
                return Err(CliError::Input(format!(
                    "explicit scheme needs {} weights and spectrum values, got {} and {}",
                    k.dimension,
                    weights.len(),
                    spectrum.len()
                )));
            }
        }
        if self.rff.draws == 0 {
            return Err(CliError::Input("rff.draws must be positive".into()));
        }
        open_unit("rff.failure_prob", self.rff.failure_prob)?;
        open_unit("certificate.epsilon", self.certificate.epsilon)?;
        open_unit("certificate.code_exponent", self.certificate.code_exponent)?;
        let p = &self.perturbation;
        if !(p.factor >= 0.0 && p.factor.is_finite()) {
            return Err(CliError::Input(format!(
                "perturbation.factor must be nonnegative, got {}",
                p.factor
            )));
        }
        if p.replicates > 1000 {
            return Err(CliError::Input(format!(
                "perturbation.replicates is capped at 1000, got {}",
                p.replicates
            )));
        }
        if self.entropy_epsilons.is_empty() || self.entropy_epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(CliError::Input("entropy_epsilons must be a nonempty list of positive values".into()));
        }
        Ok(())
    }
}
