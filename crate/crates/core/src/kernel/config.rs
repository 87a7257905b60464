use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::functional::LipschitzFunctional;
use crate::error::{Error, Result};
use crate::metric::BirthDeathSpace;
use crate::vpd::SignedDiagram;

/// Default truncation `N = dim H`.
pub const DEFAULT_DIMENSION: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightScheme {
    /// `w_n = 2^{-n/2}`, `σ_n = 2^{-n}` for `n = 1, 2, …`.
    Geometric,
    Explicit,
}

/// Data `(ℓ_n, w_n, σ_n, t)` of the Gaussian kernel
/// `k(g, h) = exp(-(t/2) Σ σ_n w_n² ℓ_n(g - h)²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConfigRepr", into = "ConfigRepr")]
pub struct KernelConfig {
    space: BirthDeathSpace,
    t: f64,
    functionals: Vec<LipschitzFunctional>,
    weights: Vec<f64>,
    spectrum: Vec<f64>,
    scheme: WeightScheme,
}

impl KernelConfig {
    pub fn geometric(space: BirthDeathSpace, t: f64, functionals: Vec<LipschitzFunctional>) -> Result<Self> {
        let n = functionals.len();
        let weights = (1..=n).map(|i| 2f64.powf(-(i as f64) / 2.0)).collect();
        let spectrum = (1..=n).map(|i| 2f64.powi(-(i as i32))).collect();
        Self::build(space, t, functionals, weights, spectrum, WeightScheme::Geometric)
    }

    pub fn explicit(
        space: BirthDeathSpace,
        t: f64,
        functionals: Vec<LipschitzFunctional>,
        weights: Vec<f64>,
        spectrum: Vec<f64>,
    ) -> Result<Self> {
        Self::build(space, t, functionals, weights, spectrum, WeightScheme::Explicit)
    }

    fn build(
        space: BirthDeathSpace,
        t: f64,
        functionals: Vec<LipschitzFunctional>,
        weights: Vec<f64>,
        spectrum: Vec<f64>,
        scheme: WeightScheme,
    ) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Argument(format!("bandwidth t must be positive, got {t}")));
        }
        if functionals.is_empty() {
            return Err(Error::Argument("kernel needs at least one functional".into()));
        }
        if weights.len() != functionals.len() || spectrum.len() != functionals.len() {
            return Err(Error::Structure(format!(
                "{} functionals, {} weights, {} spectrum values",
                functionals.len(),
                weights.len(),
                spectrum.len()
            )));
        }
        if weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::Argument("weights must be strictly positive and finite".into()));
        }
        if spectrum.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::Argument("spectrum values must be nonnegative and finite".into()));
        }
        Ok(Self {
            space,
            t,
            functionals,
            weights,
            spectrum,
            scheme,
        })
    }

    /// Validates every functional against the space (1-Lipschitz on anchors).
    pub fn validate_functionals(&self) -> Result<()> {
        self.functionals.iter().try_for_each(|f| f.validate(&self.space))
    }

    pub fn space(&self) -> BirthDeathSpace {
        self.space
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dimension(&self) -> usize {
        self.functionals.len()
    }

    pub fn functionals(&self) -> &[LipschitzFunctional] {
        &self.functionals
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    /// Same functionals and weights with every `σ_n` multiplied by `factor`.
    pub fn with_scaled_spectrum(&self, factor: f64) -> Result<Self> {
        let spectrum = self.spectrum.iter().map(|s| s * factor).collect();
        Self::explicit(self.space, self.t, self.functionals.clone(), self.weights.clone(), spectrum)
    }

    pub fn with_bandwidth(&self, t: f64) -> Result<Self> {
        Self::build(
            self.space,
            t,
            self.functionals.clone(),
            self.weights.clone(),
            self.spectrum.clone(),
            self.scheme,
        )
    }

    /// `(ℓ_n(g))_n`.
    pub fn functional_values(&self, g: &SignedDiagram) -> Result<Vec<f64>> {
        self.space.ensure_same(&g.space())?;
        Ok(self.functionals.iter().map(|f| f.evaluate_diagram(g)).collect())
    }

    /// `Σ σ_n w_n² x_n²` for precomputed functional values `x`.
    pub fn quadratic_form(&self, values: &[f64]) -> f64 {
        values
            .iter()
            .zip(self.weights.iter().zip(&self.spectrum))
            .map(|(x, (w, s))| s * w * w * x * x)
            .sum()
    }

    /// `‖Σ^{1/2} J g‖² = Σ σ_n w_n² ℓ_n(g)²`.
    pub fn embedding_norm_sq(&self, g: &SignedDiagram) -> Result<f64> {
        Ok(self.quadratic_form(&self.functional_values(g)?))
    }

    /// Kernel value from the squared seminorm of a difference.
    pub fn kernel_from_norm_sq(&self, q: f64) -> f64 {
        (-0.5 * self.t * q).exp()
    }

    /// Feature metric `√(2 - 2k)` from the squared seminorm of a difference.
    pub fn feature_metric_from_norm_sq(&self, q: f64) -> f64 {
        // 2 - 2e^{-x} = -2 expm1(-x), which stays accurate for tiny x
        (-2.0 * (-0.5 * self.t * q).exp_m1()).max(0.0).sqrt()
    }

    /// `k(g, h)`, computed from `g - h` only.
    pub fn kernel(&self, g: &SignedDiagram, h: &SignedDiagram) -> Result<f64> {
        Ok(self.kernel_from_norm_sq(self.embedding_norm_sq(&g.checked_sub(h)?)?))
    }

    /// `δ(g, h) = √(2 - 2k(g, h))`.
    pub fn feature_metric(&self, g: &SignedDiagram, h: &SignedDiagram) -> Result<f64> {
        Ok(self.feature_metric_from_norm_sq(self.embedding_norm_sq(&g.checked_sub(h)?)?))
    }

    /// `Σ σ_n w_n²`.
    pub fn trace_weight(&self) -> f64 {
        self.weights.iter().zip(&self.spectrum).map(|(w, s)| s * w * w).sum()
    }

    /// `Σ w_n²`, an upper bound for `‖J‖²`.
    pub fn weight_norm_sq(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// `Σ σ_n`.
    pub fn spectrum_trace(&self) -> f64 {
        self.spectrum.iter().sum()
    }

    /// `√t (Σ σ_n w_n²)^{1/2}`, the Lipschitz constant of `g ↦ k(·, g)`.
    pub fn lipschitz_factor(&self) -> f64 {
        (self.t * self.trace_weight()).sqrt()
    }

    /// `√t (Σ σ_n w_n²)^{1/2} ‖f‖`.
    pub fn lipschitz_bound(&self, rkhs_norm: f64) -> Result<f64> {
        if !(rkhs_norm >= 0.0) {
            return Err(Error::Argument(format!("RKHS norm must be nonnegative, got {rkhs_norm}")));
        }
        Ok(self.lipschitz_factor() * rkhs_norm)
    }

    /// Gram matrix `K_ij = k(g_i, g_j)`.
    pub fn gram_matrix(&self, diagrams: &[SignedDiagram]) -> Result<DMatrix<f64>> {
        let values = diagrams
            .iter()
            .map(|g| self.functional_values(g))
            .collect::<Result<Vec<_>>>()?;
        let n = diagrams.len();
        let mut gram = DMatrix::from_element(n, n, 1.0);
        let mut diff = vec![0.0; self.dimension()];
        for i in 0..n {
            for j in (i + 1)..n {
                for (d, (a, b)) in diff.iter_mut().zip(values[i].iter().zip(&values[j])) {
                    *d = a - b;
                }
                let k = self.kernel_from_norm_sq(self.quadratic_form(&diff));
                gram[(i, j)] = k;
                gram[(j, i)] = k;
            }
        }
        Ok(gram)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SpectrumRepr {
    Named(String),
    Values(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
struct ConfigRepr {
    space: BirthDeathSpace,
    t: f64,
    weights: WeightScheme,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight_values: Option<Vec<f64>>,
    spectrum: SpectrumRepr,
    functionals: Vec<LipschitzFunctional>,
}

impl TryFrom<ConfigRepr> for KernelConfig {
    type Error = Error;

    fn try_from(r: ConfigRepr) -> Result<Self> {
        let config = match (r.weights, r.weight_values, r.spectrum) {
            (WeightScheme::Geometric, None, SpectrumRepr::Named(s)) if s == "geometric" => {
                Self::geometric(r.space, r.t, r.functionals)?
            }
            (WeightScheme::Explicit, Some(w), SpectrumRepr::Values(s)) => {
                Self::explicit(r.space, r.t, r.functionals, w, s)?
            }
            _ => {
                return Err(Error::Structure(
                    "expected geometric weights with \"spectrum\": \"geometric\", or explicit \
                     weights with \"weight_values\" and a spectrum array"
                        .into(),
                ))
            }
        };
        config.validate_functionals()?;
        Ok(config)
    }
}

impl From<KernelConfig> for ConfigRepr {
    fn from(c: KernelConfig) -> Self {
        let geometric = c.scheme == WeightScheme::Geometric;
        Self {
            space: c.space,
            t: c.t,
            weights: c.scheme,
            weight_values: (!geometric).then_some(c.weights),
            spectrum: if geometric {
                SpectrumRepr::Named("geometric".into())
            } else {
                SpectrumRepr::Values(c.spectrum)
            },
            functionals: c.functionals,
        }
    }
}
