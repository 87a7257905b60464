use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{BirthDeath, BirthDeathSpace, MetricPair, QuotientPoint};
use crate::vpd::SignedDiagram;

/// Relative slack allowed when checking the Lipschitz condition on anchors.
pub const LIPSCHITZ_TOLERANCE: f64 = 1e-12;

/// The McShane extension `ℓ(x) = min_{y ∈ T} (v(y) + d₁(x, y))` of values
/// prescribed on a finite anchor set `T`.
///
/// The basepoint is always an implicit anchor with value 0, so an empty anchor
/// set gives the basepoint-distance functional `d₁(·, [A])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzFunctional {
    anchors: Arc<[BirthDeath]>,
    values: Vec<f64>,
}

impl LipschitzFunctional {
    /// `x ↦ d₁(x, [A])`.
    pub fn basepoint_distance() -> Self {
        Self {
            anchors: Arc::from(Vec::new()),
            values: Vec::new(),
        }
    }

    /// Validates that the values are 1-Lipschitz on `T ∪ {[A]}`.
    pub fn new(space: &BirthDeathSpace, anchors: Arc<[BirthDeath]>, values: Vec<f64>) -> Result<Self> {
        let f = Self::new_unchecked(anchors, values)?;
        f.validate(space)?;
        Ok(f)
    }

    /// Skips the Lipschitz check; used when the values are Lipschitz by construction.
    pub(crate) fn new_unchecked(anchors: Arc<[BirthDeath]>, values: Vec<f64>) -> Result<Self> {
        if anchors.len() != values.len() {
            return Err(Error::Structure(format!(
                "{} anchors but {} values",
                anchors.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Structure("non-finite functional value".into()));
        }
        Ok(Self { anchors, values })
    }

    pub fn anchors(&self) -> &[BirthDeath] {
        &self.anchors
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn validate(&self, space: &BirthDeathSpace) -> Result<()> {
        let n = self.anchors.len();
        for i in 0..n {
            space.validate(&self.anchors[i])?;
            let x = &self.anchors[i];
            check_pair(self.values[i], 0.0, space.distance_to_diagonal(x), || format!("{x} and [A]"))?;
            for j in (i + 1)..n {
                let y = &self.anchors[j];
                let d = space.strengthened_distance(x, y);
                check_pair(self.values[i], self.values[j], d, || format!("{x} and {y}"))?;
            }
        }
        Ok(())
    }

    pub fn evaluate_point(&self, space: &BirthDeathSpace, x: &BirthDeath) -> f64 {
        self.anchors
            .iter()
            .zip(&self.values)
            .map(|(a, v)| v + space.strengthened_distance(x, a))
            .fold(space.distance_to_diagonal(x), f64::min)
    }

    pub fn evaluate(&self, space: &BirthDeathSpace, x: &QuotientPoint) -> f64 {
        x.point().map_or(0.0, |p| self.evaluate_point(space, p))
    }

    /// Linear extension `ℓ(g) = Σ n_u ℓ(u)`.
    pub fn evaluate_diagram(&self, g: &SignedDiagram) -> f64 {
        let space = g.space();
        g.entries()
            .iter()
            .map(|(p, n)| *n as f64 * self.evaluate_point(&space, p))
            .sum()
    }
}

fn check_pair(a: f64, b: f64, d: f64, what: impl FnOnce() -> String) -> Result<()> {
    if (a - b).abs() > d + LIPSCHITZ_TOLERANCE * d.max(1.0) {
        return Err(Error::Precondition(format!(
            "functional is not 1-Lipschitz between {}: |{a} - {b}| > {d}",
            what()
        )));
    }
    Ok(())
}
