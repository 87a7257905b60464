//! Signed virtual persistence diagrams: elements of `K(X, A)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{BirthDeath, BirthDeathSpace, MetricPair};

/// A finite integer combination `g = Σ n_u e_u` of off-diagonal points.
///
/// Always canonical: entries are sorted by point, multiplicities are nonzero,
/// and diagonal points (which equal `[A]` in the quotient) are dropped.
/// Diagrams with only positive multiplicities are the elements of `D(X, A)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramRepr", into = "DiagramRepr")]
pub struct SignedDiagram {
    space: BirthDeathSpace,
    entries: Vec<(BirthDeath, i64)>,
}

impl SignedDiagram {
    pub fn zero(space: BirthDeathSpace) -> Self {
        Self {
            space,
            entries: Vec::new(),
        }
    }

    /// Builds the canonical form of `Σ n_i e_{p_i}`, merging repeated points.
    pub fn from_entries<I>(space: BirthDeathSpace, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BirthDeath, i64)>,
    {
        let mut merged: BTreeMap<BirthDeath, i64> = BTreeMap::new();
        for (p, n) in entries {
            space.validate(&p)?;
            if space.is_diagonal(&p) {
                continue;
            }
            let slot = merged.entry(p).or_insert(0);
            *slot = slot
                .checked_add(n)
                .ok_or_else(|| Error::Argument("multiplicity overflow".into()))?;
        }
        Ok(Self {
            space,
            entries: merged.into_iter().filter(|(_, n)| *n != 0).collect(),
        })
    }

    /// A nonnegative diagram with one copy of each listed point.
    pub fn from_points<I>(space: BirthDeathSpace, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = BirthDeath>,
    {
        Self::from_entries(space, points.into_iter().map(|p| (p, 1)))
    }

    /// The generator `e_u`.
    pub fn singleton(space: BirthDeathSpace, point: BirthDeath) -> Result<Self> {
        Self::from_entries(space, [(point, 1)])
    }

    pub fn space(&self) -> BirthDeathSpace {
        self.space
    }

    pub fn entries(&self) -> &[(BirthDeath, i64)] {
        &self.entries
    }

    pub fn support(&self) -> impl Iterator<Item = &BirthDeath> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct support points.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// `Σ |n_u|`.
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|(_, n)| n.unsigned_abs()).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|(_, n)| *n > 0)
    }

    /// `g₊ = Σ max(n_u, 0) e_u`.
    pub fn positive_part(&self) -> Self {
        self.filter_map(|n| (n > 0).then_some(n))
    }

    /// `g₋ = Σ max(-n_u, 0) e_u`, so that `g = g₊ - g₋`.
    pub fn negative_part(&self) -> Self {
        self.filter_map(|n| (n < 0).then_some(-n))
    }

    fn filter_map(&self, f: impl Fn(i64) -> Option<i64>) -> Self {
        Self {
            space: self.space,
            entries: self
                .entries
                .iter()
                .filter_map(|(p, n)| f(*n).map(|m| (p.clone(), m)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.filter_map(|n| Some(-n))
    }

    pub fn scaled(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero(self.space);
        }
        self.filter_map(|n| Some(n * k))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.entries, &other.entries);
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some((p, _)), Some((q, _))) => p.cmp(q),
                (Some(_), None) => Ordering::Less,
                (None, _) => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[j].0.clone(), sign * b[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let n = a[i].1 + sign * b[j].1;
                    if n != 0 {
                        out.push((a[i].0.clone(), n));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(Self {
            space: self.space,
            entries: out,
        })
    }

    /// `M(g) = Σ |n_u| d₁(u, [A])`.
    pub fn mass(&self) -> f64 {
        self.entries
            .iter()
            .map(|(p, n)| n.unsigned_abs() as f64 * self.space.distance_to_diagonal(p))
            .sum()
    }

    /// Mean lifetime over the expanded points; zero for the empty diagram.
    pub fn mean_lifetime(&self) -> f64 {
        let count = self.total_multiplicity();
        if count == 0 {
            0.0
        } else {
            self.mass() / count as f64
        }
    }

    /// Unit points of a nonnegative diagram, each repeated by multiplicity.
    pub fn expanded_points(&self) -> Result<Vec<&BirthDeath>> {
        if !self.is_nonnegative() {
            return Err(Error::Precondition(
                "expansion requires a diagram with positive multiplicities".into(),
            ));
        }
        Ok(self
            .entries
            .iter()
            .flat_map(|(p, n)| std::iter::repeat(p).take(*n as usize))
            .collect())
    }
}

impl PartialOrd for SignedDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order on the canonical entry lists.
impl Ord for SignedDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.entries.cmp(&other.entries)
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    space: BirthDeathSpace,
    points: Vec<PointRepr>,
}

#[derive(Serialize, Deserialize)]
struct PointRepr {
    birth: crate::metric::Label,
    death: crate::metric::Label,
    multiplicity: i64,
}

impl TryFrom<DiagramRepr> for SignedDiagram {
    type Error = Error;

    fn try_from(repr: DiagramRepr) -> Result<Self> {
        Self::from_entries(
            repr.space,
            repr.points
                .into_iter()
                .map(|p| (BirthDeath::new(p.birth, p.death), p.multiplicity)),
        )
    }
}

impl From<SignedDiagram> for DiagramRepr {
    fn from(d: SignedDiagram) -> Self {
        Self {
            space: d.space,
            points: d
                .entries
                .into_iter()
                .map(|(p, n)| PointRepr {
                    birth: p.birth,
                    death: p.death,
                    multiplicity: n,
                })
                .collect(),
        }
    }
}
