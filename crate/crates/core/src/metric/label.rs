//! Partially ordered metric label spaces.

use std::cmp::Ordering;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalue tolerance for Löwner comparisons and PSD validity.
pub const LOEWNER_TOLERANCE: f64 = 1e-10;

/// Default grid size for sampled functions on `[0, 1]`.
pub const DEFAULT_GRID: usize = 32;

/// A point of a label space, stored as a flat coordinate vector.
///
/// Reals have one coordinate, vectors `n`, sampled functions `G` and
/// matrices `n * n` in row-major order. Negative zero is normalized so that
/// equality and ordering agree with the metric.
#[derive(Clone, PartialEq)]
pub struct Label(Vec<f64>);

impl Label {
    pub fn new(mut coords: Vec<f64>) -> Self {
        for c in &mut coords {
            if *c == 0.0 {
                *c = 0.0;
            }
        }
        Self(coords)
    }

    pub fn real(x: f64) -> Self {
        Self::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Eq for Label {}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            return write!(f, "{:.4}", self.0[0]);
        }
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c:.4}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.len() == 1 {
            serializer.serialize_f64(self.0[0])
        } else {
            let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
            for c in &self.0 {
                seq.serialize_element(c)?;
            }
            seq.end()
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LabelVisitor;

        impl<'de> Visitor<'de> for LabelVisitor {
            type Value = Label;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or an array of numbers")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Label, E> {
                Ok(Label::real(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Label, E> {
                Ok(Label::real(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Label, E> {
                Ok(Label::real(v as f64))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Label, A::Error> {
                let mut coords = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(c) = seq.next_element::<f64>()? {
                    coords.push(c);
                }
                Ok(Label::new(coords))
            }
        }

        deserializer.deserialize_any(LabelVisitor)
    }
}

/// The built-in label spaces `(P, d_P, ⪯, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LabelSpace {
    /// `ℝ` with its usual order, `|a - b|`, and `s = id`.
    RealLine,
    /// `ℝⁿ` with the product order, the Euclidean metric and `s = max coordinate`.
    Euclidean { dim: usize },
    /// `C([0,1])` sampled on a uniform grid of `grid` points, with the
    /// pointwise order, the sup metric over the grid and `s = sup value`.
    SampledFunction { grid: usize },
    /// Symmetric `n × n` PSD matrices with the Löwner order, the Frobenius
    /// metric and `s = trace`.
    PsdMatrix { dim: usize },
}

impl LabelSpace {
    pub fn name(&self) -> String {
        match self {
            Self::RealLine => "R".to_string(),
            Self::Euclidean { dim } => format!("R^{dim}"),
            Self::SampledFunction { grid } => format!("C([0,1])@{grid}"),
            Self::PsdMatrix { dim } => format!("S+_{dim}"),
        }
    }

    /// Number of stored coordinates per label.
    pub fn payload_len(&self) -> usize {
        match *self {
            Self::RealLine => 1,
            Self::Euclidean { dim } => dim,
            Self::SampledFunction { grid } => grid,
            Self::PsdMatrix { dim } => dim * dim,
        }
    }

    /// Ambient uniform discreteness of `(P²/A, d₁, [A])`. None of the
    /// built-in spaces is uniformly discrete: each contains arbitrarily short
    /// lifetimes `(p, p + η)`.
    pub fn is_ambient_uniformly_discrete(&self) -> bool {
        false
    }

    pub fn validate(&self, label: &Label) -> Result<()> {
        if label.len() != self.payload_len() {
            return Err(Error::Structure(format!(
                "label of length {} does not belong to {} (expected {})",
                label.len(),
                self.name(),
                self.payload_len()
            )));
        }
        if label.coords().iter().any(|c| !c.is_finite()) {
            return Err(Error::Structure(format!("non-finite label coordinate in {}", self.name())));
        }
        if let Self::PsdMatrix { dim } = *self {
            let m = DMatrix::from_row_slice(dim, dim, label.coords());
            let asym = (&m - m.transpose()).abs().max();
            if asym > 1e-9 * (1.0 + m.abs().max()) {
                return Err(Error::Structure("PSD label is not symmetric".into()));
            }
            if min_eigenvalue(&m) < -LOEWNER_TOLERANCE {
                return Err(Error::Structure("PSD label has a negative eigenvalue".into()));
            }
        }
        Ok(())
    }

    /// The metric `d_P`.
    pub fn distance(&self, a: &Label, b: &Label) -> f64 {
        let (x, y) = (a.coords(), b.coords());
        match self {
            Self::RealLine => (x[0] - y[0]).abs(),
            Self::Euclidean { .. } | Self::PsdMatrix { .. } => x
                .iter()
                .zip(y)
                .map(|(p, q)| (p - q) * (p - q))
                .sum::<f64>()
                .sqrt(),
            Self::SampledFunction { .. } => x
                .iter()
                .zip(y)
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max),
        }
    }

    /// `a ⪯ b`.
    pub fn precedes(&self, a: &Label, b: &Label) -> bool {
        let (x, y) = (a.coords(), b.coords());
        match *self {
            Self::RealLine => x[0] <= y[0],
            Self::Euclidean { .. } | Self::SampledFunction { .. } => {
                x.iter().zip(y).all(|(p, q)| p <= q)
            }
            Self::PsdMatrix { dim } => {
                let diff: Vec<f64> = y.iter().zip(x).map(|(q, p)| q - p).collect();
                min_eigenvalue(&DMatrix::from_row_slice(dim, dim, &diff)) >= -LOEWNER_TOLERANCE
            }
        }
    }

    /// The partial order as a three-way test; `None` means incomparable.
    pub fn compare(&self, a: &Label, b: &Label) -> Option<Ordering> {
        match (self.precedes(a, b), self.precedes(b, a)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Less),
            (false, true) => Some(Ordering::Greater),
            (false, false) => None,
        }
    }

    /// Monotone scalarization `s : P → ℝ`.
    pub fn scalarize(&self, a: &Label) -> f64 {
        let x = a.coords();
        match *self {
            Self::RealLine => x[0],
            Self::Euclidean { .. } | Self::SampledFunction { .. } => {
                x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            }
            Self::PsdMatrix { dim } => (0..dim).map(|i| x[i * dim + i]).sum(),
        }
    }

    /// A canonical label with scalarization `level`: the constant vector or
    /// function, or `(level / n)·I` for matrices.
    pub fn constant_label(&self, level: f64) -> Label {
        match *self {
            Self::RealLine => Label::real(level),
            Self::Euclidean { dim } => Label::new(vec![level; dim]),
            Self::SampledFunction { grid } => Label::new(vec![level; grid]),
            Self::PsdMatrix { dim } => {
                let mut m = vec![0.0; dim * dim];
                for i in 0..dim {
                    m[i * dim + i] = level / dim as f64;
                }
                Label::new(m)
            }
        }
    }

    /// Moves `a` by at most `eta` in `d_P` while staying inside `P`.
    ///
    /// `unit` supplies uniforms in `(0, 1)`. Reals and vectors get a signed
    /// shift, functions a constant vertical shift (preserving monotonicity),
    /// and matrices a nonnegative multiple of the identity.
    pub fn perturb(&self, a: &Label, eta: f64, mut unit: impl FnMut() -> f64) -> Label {
        let x = a.coords();
        match *self {
            Self::RealLine => Label::real(x[0] + eta * (2.0 * unit() - 1.0)),
            Self::Euclidean { dim } => {
                let dir: Vec<f64> = (0..dim).map(|_| 2.0 * unit() - 1.0).collect();
                let norm = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
                let radius = eta * unit();
                if norm == 0.0 {
                    return a.clone();
                }
                Label::new(x.iter().zip(&dir).map(|(p, d)| p + radius * d / norm).collect())
            }
            Self::SampledFunction { .. } => {
                let shift = eta * (2.0 * unit() - 1.0);
                Label::new(x.iter().map(|p| p + shift).collect())
            }
            Self::PsdMatrix { dim } => {
                let c = eta * unit() / (dim as f64).sqrt();
                let mut m = x.to_vec();
                for i in 0..dim {
                    m[i * dim + i] += c;
                }
                Label::new(m)
            }
        }
    }
}

impl fmt::Display for LabelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub(crate) fn min_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let sym = (m + m.transpose()) * 0.5;
    SymmetricEigen::new(sym)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}
