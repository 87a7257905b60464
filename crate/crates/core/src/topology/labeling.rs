use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::graph::Graph;
use super::spectral::SpectralData;
use crate::error::{Error, Result};
use crate::metric::{Label, LabelSpace};

/// Increment added to each step of a profile so it is strictly increasing.
pub const PROFILE_FLOOR: f64 = 1e-12;
/// Base vertex for the function-profile labeling.
pub const PROFILE_BASE_VERTEX: usize = 0;

/// The four spectral edge labelings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LabelingKind {
    /// Max of the endpoint Laplacian-pseudoinverse diagonals, in `ℝ`.
    RealMaxdiag,
    /// Coordinatewise max of endpoint heat diagonals at three times, in `ℝ³`.
    R3Heat,
    /// Normalized cumulative heat-profile differences, in `C([0,1])`.
    FunctionProfile,
    /// Outer product of the endpoint heat-embedding difference, in `S⁺₃`.
    PsdOuter,
}

impl LabelingKind {
    pub const ALL: [LabelingKind; 4] = [Self::RealMaxdiag, Self::R3Heat, Self::FunctionProfile, Self::PsdOuter];

    pub fn name(&self) -> &'static str {
        match self {
            Self::RealMaxdiag => "real-maxdiag",
            Self::R3Heat => "r3-heat",
            Self::FunctionProfile => "function-profile",
            Self::PsdOuter => "psd-outer",
        }
    }

    pub fn label_space(&self, grid: usize) -> LabelSpace {
        match self {
            Self::RealMaxdiag => LabelSpace::RealLine,
            Self::R3Heat => LabelSpace::Euclidean { dim: 3 },
            Self::FunctionProfile => LabelSpace::SampledFunction { grid },
            Self::PsdOuter => LabelSpace::PsdMatrix { dim: 3 },
        }
    }

    fn accepts(&self, space: LabelSpace) -> bool {
        matches!(
            (self, space),
            (Self::RealMaxdiag, LabelSpace::RealLine)
                | (Self::R3Heat, LabelSpace::Euclidean { dim: 3 })
                | (Self::FunctionProfile, LabelSpace::SampledFunction { .. })
                | (Self::PsdOuter, LabelSpace::PsdMatrix { dim: 3 })
        )
    }
}

impl fmt::Display for LabelingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LabelingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Argument(format!("unknown labeling {s:?}")))
    }
}

/// Per-edge labels, aligned with the graph's sorted edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeLabeling {
    pub kind: LabelingKind,
    pub space: LabelSpace,
    pub labels: Vec<Label>,
    /// Heat time scales used, if any.
    pub time_scales: Vec<f64>,
}

impl EdgeLabeling {
    /// Validates that `space` suits `kind` and every label lies in `space`.
    pub fn new(kind: LabelingKind, space: LabelSpace, labels: Vec<Label>, time_scales: Vec<f64>) -> Result<Self> {
        if !kind.accepts(space) {
            return Err(Error::Structure(format!("labeling {kind} cannot take values in {space}")));
        }
        labels.iter().try_for_each(|l| space.validate(l))?;
        Ok(Self {
            kind,
            space,
            labels,
            time_scales,
        })
    }

    /// Real-valued labels for hand-built examples.
    pub fn from_scalars(scalars: &[f64]) -> Self {
        Self {
            kind: LabelingKind::RealMaxdiag,
            space: LabelSpace::RealLine,
            labels: scalars.iter().map(|&x| Label::real(x)).collect(),
            time_scales: Vec::new(),
        }
    }

    pub fn scalars(&self) -> Vec<f64> {
        self.labels.iter().map(|l| self.space.scalarize(l)).collect()
    }
}

/// Computes the labeling `kind` with `grid` samples for function labels.
pub fn label_edges(graph: &Graph, spectral: &SpectralData, kind: LabelingKind, grid: usize) -> Result<EdgeLabeling> {
    let n = graph.vertex_count();
    if spectral.vertex_count() != n {
        return Err(Error::Structure(format!(
            "spectral data has {} vertices, graph has {n}",
            spectral.vertex_count()
        )));
    }
    if kind == LabelingKind::FunctionProfile && grid < 2 {
        return Err(Error::Argument(format!("function grid needs at least 2 points, got {grid}")));
    }
    let space = kind.label_space(grid);
    let edges = graph.edges();
    let (labels, times) = match kind {
        LabelingKind::RealMaxdiag => {
            let d = spectral.pseudoinverse_diagonal();
            let labels = edges.iter().map(|&(u, v)| Label::real(d[u].max(d[v]))).collect();
            (labels, Vec::new())
        }
        LabelingKind::R3Heat | LabelingKind::PsdOuter => {
            let times = spectral.time_scales()?;
            let diag: Vec<Vec<f64>> = times.iter().map(|&s| spectral.heat_diagonal(s)).collect();
            let embed = |v: usize| [diag[0][v], diag[1][v], diag[2][v]];
            let labels = edges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (embed(u), embed(v));
                    if kind == LabelingKind::R3Heat {
                        Label::new((0..3).map(|i| a[i].max(b[i])).collect())
                    } else {
                        let d: Vec<f64> = (0..3).map(|i| a[i] - b[i]).collect();
                        Label::new((0..9).map(|k| d[k / 3] * d[k % 3]).collect())
                    }
                })
                .collect();
            (labels, times.to_vec())
        }
        LabelingKind::FunctionProfile => {
            let horizon = 2.0 / spectral.spectral_gap()?;
            let times: Vec<f64> = (0..grid).map(|j| horizon * j as f64 / (grid - 1) as f64).collect();
            let profile: Vec<Vec<f64>> = (0..n)
                .map(|v| times.iter().map(|&s| spectral.heat_entry(s, v, PROFILE_BASE_VERTEX)).collect())
                .collect();
            let labels = edges
                .iter()
                .map(|&(u, v)| {
                    let mut f = vec![0.0; grid];
                    for j in 1..grid {
                        f[j] = f[j - 1] + (profile[u][j] - profile[v][j]).abs() + PROFILE_FLOOR;
                    }
                    let total = f[grid - 1];
                    f.iter_mut().for_each(|x| *x /= total);
                    f[grid - 1] = 1.0;
                    Label::new(f)
                })
                .collect();
            (labels, vec![horizon])
        }
    };
    EdgeLabeling::new(kind, space, labels, times)
}
