//! Metric pairs `(X, d, A)`, the 1-strengthened metric and quotient points.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::label::{Label, LabelSpace};
use crate::error::{Error, Result};

/// A metric space with a distinguished subset `A` (the diagonal).
pub trait MetricPair {
    type Point;

    /// `d(x, y)`.
    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// `d(x, A) = inf_{a ∈ A} d(x, a)`.
    fn distance_to_diagonal(&self, x: &Self::Point) -> f64;

    /// `d₁(x, y) = min(d(x, y), d(x, A) + d(y, A))`.
    fn strengthened_distance(&self, x: &Self::Point, y: &Self::Point) -> f64 {
        let direct = self.distance(x, y);
        let via_diagonal = self.distance_to_diagonal(x) + self.distance_to_diagonal(y);
        direct.min(via_diagonal)
    }

    /// `d₁` on the quotient `X/A`, where `A` is collapsed to `[A]`.
    fn quotient_distance(&self, x: &QuotientPoint<Self::Point>, y: &QuotientPoint<Self::Point>) -> f64 {
        match (x.point(), y.point()) {
            (None, None) => 0.0,
            (Some(p), None) | (None, Some(p)) => self.distance_to_diagonal(p),
            (Some(p), Some(q)) => self.strengthened_distance(p, q),
        }
    }
}

/// A birth–death pair `(b, d) ∈ P²`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BirthDeath {
    pub birth: Label,
    pub death: Label,
}

impl BirthDeath {
    pub fn new(birth: Label, death: Label) -> Self {
        Self { birth, death }
    }

    pub fn real(birth: f64, death: f64) -> Self {
        Self::new(Label::real(birth), Label::real(death))
    }
}

impl fmt::Display for BirthDeath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.birth, self.death)
    }
}

/// `(P², d_P ⊕ d_P, A)` with `A = {(p, p)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BirthDeathSpace {
    labels: LabelSpace,
}

impl BirthDeathSpace {
    pub fn new(labels: LabelSpace) -> Self {
        Self { labels }
    }

    pub fn labels(&self) -> LabelSpace {
        self.labels
    }

    pub fn validate(&self, p: &BirthDeath) -> Result<()> {
        self.labels.validate(&p.birth)?;
        self.labels.validate(&p.death)
    }

    pub fn ensure_same(&self, other: &Self) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch(format!("{} vs {}", self.labels, other.labels)))
        }
    }

    /// Checked `d₁` that rejects points whose payloads do not fit the space.
    pub fn try_strengthened_distance(
        &self,
        x: &QuotientPoint<BirthDeath>,
        y: &QuotientPoint<BirthDeath>,
    ) -> Result<f64> {
        for p in [x, y].into_iter().filter_map(|q| q.point()) {
            self.validate(p)?;
        }
        Ok(self.quotient_distance(x, y))
    }

    /// Lifetime `d_P(b, d)`, i.e. the distance to the diagonal.
    pub fn lifetime(&self, p: &BirthDeath) -> f64 {
        self.labels.distance(&p.birth, &p.death)
    }

    /// True when `p` lies on the diagonal and hence is `[A]` in the quotient.
    pub fn is_diagonal(&self, p: &BirthDeath) -> bool {
        self.lifetime(p) == 0.0
    }
}

impl MetricPair for BirthDeathSpace {
    type Point = BirthDeath;

    fn distance(&self, x: &BirthDeath, y: &BirthDeath) -> f64 {
        self.labels.distance(&x.birth, &y.birth) + self.labels.distance(&x.death, &y.death)
    }

    /// For the ℓ₁ product metric, `inf_q d_P(b, q) + d_P(d, q) = d_P(b, d)`:
    /// `q = b` attains it and the triangle inequality bounds it below.
    fn distance_to_diagonal(&self, x: &BirthDeath) -> f64 {
        self.labels.distance(&x.birth, &x.death)
    }
}

/// A complex number as `(re, im)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub re: f64,
    pub im: f64,
}

/// Demo pair: `X = ℂ` with the taxicab metric, `A` the unit circle.
///
/// The diagonal distance uses the modulus, `d(x, A) = ||x| - 1|`, while
/// pairwise distances use ℓ₁. The two do not come from a single norm. Since
/// `||x| - 1|` is 1-Lipschitz for ℓ₁, `d₁` is still a metric.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexCirclePair;

impl MetricPair for ComplexCirclePair {
    type Point = ComplexPoint;

    fn distance(&self, x: &ComplexPoint, y: &ComplexPoint) -> f64 {
        (x.re - y.re).abs() + (x.im - y.im).abs()
    }

    fn distance_to_diagonal(&self, x: &ComplexPoint) -> f64 {
        (x.re.hypot(x.im) - 1.0).abs()
    }
}

/// A point of `X/A`: the basepoint `[A]`, an off-diagonal point, or an
/// essential class whose infinite death was replaced by a finite ceiling.
#[derive(Debug, Clone, PartialEq)]
pub enum QuotientPoint<P = BirthDeath> {
    Basepoint,
    Point(P),
    /// Carries the rendered point `(birth, ceiling)`; used only for dendrograms.
    Essential(P),
}

impl<P> QuotientPoint<P> {
    /// The representative point used for distances, `None` for `[A]`.
    pub fn point(&self) -> Option<&P> {
        match self {
            Self::Basepoint => None,
            Self::Point(p) | Self::Essential(p) => Some(p),
        }
    }

    pub fn is_basepoint(&self) -> bool {
        matches!(self, Self::Basepoint)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum QuotientRepr {
    Basepoint {
        basepoint: bool,
    },
    Point {
        birth: Label,
        death: Label,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        essential: bool,
    },
}

impl Serialize for QuotientPoint<BirthDeath> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            Self::Basepoint => QuotientRepr::Basepoint { basepoint: true },
            Self::Point(p) => QuotientRepr::Point {
                birth: p.birth.clone(),
                death: p.death.clone(),
                essential: false,
            },
            Self::Essential(p) => QuotientRepr::Point {
                birth: p.birth.clone(),
                death: p.death.clone(),
                essential: true,
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuotientPoint<BirthDeath> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match QuotientRepr::deserialize(deserializer)? {
            QuotientRepr::Basepoint { basepoint: true } => Ok(Self::Basepoint),
            QuotientRepr::Basepoint { basepoint: false } => Err(serde::de::Error::custom(
                "\"basepoint\" must be true when present",
            )),
            QuotientRepr::Point { birth, death, essential } => {
                let p = BirthDeath::new(birth, death);
                Ok(if essential { Self::Essential(p) } else { Self::Point(p) })
            }
        }
    }
}

/// Whether `d₁(u, v) ≥ epsilon` for all distinct `u, v` in the sample
/// together with the basepoint.
///
/// This certifies the finite sample only; ambient uniform discreteness cannot
/// be decided from finitely many points.
pub fn is_uniformly_discrete<M: MetricPair>(
    space: &M,
    points: &[QuotientPoint<M::Point>],
    epsilon: f64,
) -> Result<bool> {
    if !(epsilon > 0.0) {
        return Err(Error::Argument(format!("epsilon must be positive, got {epsilon}")));
    }
    if points.is_empty() {
        return Err(Error::Argument("empty point sample".into()));
    }
    let mut all: Vec<&QuotientPoint<M::Point>> = Vec::with_capacity(points.len() + 1);
    let basepoint = QuotientPoint::Basepoint;
    all.push(&basepoint);
    all.extend(points.iter().filter(|p| !p.is_basepoint()));
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let d = space.quotient_distance(all[i], all[j]);
            // zero distance means the same quotient point
            if d > 0.0 && d < epsilon {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
