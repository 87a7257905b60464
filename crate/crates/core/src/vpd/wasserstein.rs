//! The matching metric `W₁` on `D(X, A)` and its Grothendieck extension `ρ`.

use std::collections::BTreeMap;

use super::assignment::{assignment_cost, solve_assignment};
use super::diagram::SignedDiagram;
use crate::error::{Error, Result};
use crate::metric::{BirthDeath, BirthDeathSpace, MetricPair, QuotientPoint};

/// Default cap on the number of expanded unit points per side.
pub const DEFAULT_MAX_EXPANDED_POINTS: usize = 500;

/// One matched pair with its multiplicity; either side may be `[A]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPair {
    pub source: QuotientPoint,
    pub target: QuotientPoint,
    pub multiplicity: u64,
    pub cost: f64,
}

/// An optimal matching between two nonnegative diagrams.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub pairs: Vec<MatchedPair>,
    pub cost: f64,
}

impl Matching {
    /// Source marginal with basepoint copies removed.
    pub fn source_marginal(&self, space: BirthDeathSpace) -> Result<SignedDiagram> {
        marginal(space, self.pairs.iter().map(|p| (&p.source, p.multiplicity)))
    }

    /// Target marginal with basepoint copies removed.
    pub fn target_marginal(&self, space: BirthDeathSpace) -> Result<SignedDiagram> {
        marginal(space, self.pairs.iter().map(|p| (&p.target, p.multiplicity)))
    }
}

fn marginal<'a>(
    space: BirthDeathSpace,
    side: impl Iterator<Item = (&'a QuotientPoint, u64)>,
) -> Result<SignedDiagram> {
    SignedDiagram::from_entries(
        space,
        side.filter_map(|(q, m)| q.point().map(|p| (p.clone(), m as i64))),
    )
}

struct Problem<'a> {
    side_a: Vec<&'a BirthDeath>,
    side_b: Vec<&'a BirthDeath>,
    costs: Vec<f64>,
    size: usize,
}

fn build_problem<'a>(
    alpha: &'a SignedDiagram,
    beta: &'a SignedDiagram,
    cap: usize,
) -> Result<Problem<'a>> {
    let space = alpha.space();
    space.ensure_same(&beta.space())?;
    let side_a = alpha.expanded_points()?;
    let side_b = beta.expanded_points()?;
    for (side, name) in [(&side_a, "first"), (&side_b, "second")] {
        if side.len() > cap {
            return Err(Error::Capacity(format!(
                "{name} diagram expands to {} points, above the cap of {cap}",
                side.len()
            )));
        }
    }
    let (m, n) = (side_a.len(), side_b.len());
    let size = m + n;
    // rows: alpha points, then one diagonal slot per beta point
    // cols: beta points, then one diagonal slot per alpha point
    let mut costs = vec![0.0; size * size];
    let diag_a: Vec<f64> = side_a.iter().map(|p| space.distance_to_diagonal(p)).collect();
    let diag_b: Vec<f64> = side_b.iter().map(|p| space.distance_to_diagonal(p)).collect();
    for i in 0..m {
        let row = &mut costs[i * size..(i + 1) * size];
        for j in 0..n {
            row[j] = space.strengthened_distance(side_a[i], side_b[j]);
        }
        row[n..].fill(diag_a[i]);
    }
    for i in m..size {
        let row = &mut costs[i * size..(i + 1) * size];
        row[..n].copy_from_slice(&diag_b);
    }
    Ok(Problem {
        side_a,
        side_b,
        costs,
        size,
    })
}

/// `W₁(α, β)` with the default expansion cap.
pub fn wasserstein1(alpha: &SignedDiagram, beta: &SignedDiagram) -> Result<f64> {
    wasserstein1_with_cap(alpha, beta, DEFAULT_MAX_EXPANDED_POINTS)
}

/// Exact `W₁(α, β)` by square assignment on the diagonal-augmented matrix.
pub fn wasserstein1_with_cap(alpha: &SignedDiagram, beta: &SignedDiagram, cap: usize) -> Result<f64> {
    let problem = build_problem(alpha, beta, cap)?;
    let assignment = solve_assignment(&problem.costs, problem.size);
    Ok(assignment_cost(&problem.costs, problem.size, &assignment))
}

/// An optimal matching realizing `W₁(α, β)`; ties are broken arbitrarily.
pub fn optimal_matching(alpha: &SignedDiagram, beta: &SignedDiagram) -> Result<Matching> {
    let problem = build_problem(alpha, beta, DEFAULT_MAX_EXPANDED_POINTS)?;
    let assignment = solve_assignment(&problem.costs, problem.size);
    let (m, n) = (problem.side_a.len(), problem.side_b.len());
    let mut merged: BTreeMap<(Option<&BirthDeath>, Option<&BirthDeath>), (u64, f64)> = BTreeMap::new();
    for (i, &j) in assignment.iter().enumerate() {
        let source = (i < m).then(|| problem.side_a[i]);
        let target = (j < n).then(|| problem.side_b[j]);
        if source.is_none() && target.is_none() {
            continue;
        }
        let slot = merged.entry((source, target)).or_insert((0, 0.0));
        slot.0 += 1;
        slot.1 += problem.costs[i * problem.size + j];
    }
    let wrap = |p: Option<&BirthDeath>| p.map_or(QuotientPoint::Basepoint, |p| QuotientPoint::Point(p.clone()));
    let pairs = merged
        .into_iter()
        .map(|((s, t), (multiplicity, cost))| MatchedPair {
            source: wrap(s),
            target: wrap(t),
            multiplicity,
            cost,
        })
        .collect();
    Ok(Matching {
        pairs,
        cost: assignment_cost(&problem.costs, problem.size, &assignment),
    })
}

/// `ρ(g, h) = W₁(k₊, k₋)` for `k = g - h` in canonical form.
///
/// Computed from the difference only, so translation invariance holds exactly.
pub fn grothendieck_rho(g: &SignedDiagram, h: &SignedDiagram) -> Result<f64> {
    let k = g.checked_sub(h)?;
    wasserstein1(&k.positive_part(), &k.negative_part())
}
