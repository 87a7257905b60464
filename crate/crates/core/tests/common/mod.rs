//! Independent oracles and random generators shared by the test suites.
#![allow(dead_code)]

use vpdk::metric::{BirthDeath, BirthDeathSpace, Label, LabelSpace, MetricPair};
use vpdk::rng::{CounterRng, RngCursor};
use vpdk::topology::FilteredComplex;
use vpdk::vpd::SignedDiagram;

pub fn real_space() -> BirthDeathSpace {
    BirthDeathSpace::new(LabelSpace::RealLine)
}

/// The four label spaces of the graph example, with a short function grid.
pub fn example_spaces(grid: usize) -> [BirthDeathSpace; 4] {
    [
        LabelSpace::RealLine,
        LabelSpace::Euclidean { dim: 3 },
        LabelSpace::SampledFunction { grid },
        LabelSpace::PsdMatrix { dim: 3 },
    ]
    .map(BirthDeathSpace::new)
}

pub fn cursor(seed: u64) -> RngCursor {
    CounterRng::new(seed, 0x7E57).cursor()
}

/// A dyadic rational `k / 8` with `k` in `[0, 8 * max]`.
pub fn dyadic(cur: &mut RngCursor, max: u64) -> f64 {
    cur.below(8 * max + 1) as f64 / 8.0
}

/// A random real birth–death point with dyadic coordinates and `birth < death`.
pub fn dyadic_point(cur: &mut RngCursor) -> BirthDeath {
    let b = dyadic(cur, 4);
    let life = (1 + cur.below(24)) as f64 / 8.0;
    BirthDeath::real(b, b + life)
}

/// A random label in `space`.
pub fn random_label(space: LabelSpace, cur: &mut RngCursor) -> Label {
    match space {
        LabelSpace::RealLine => Label::real(cur.uniform_range(-2.0, 2.0)),
        LabelSpace::Euclidean { dim } => Label::new((0..dim).map(|_| cur.uniform_range(-1.0, 1.0)).collect()),
        LabelSpace::SampledFunction { grid } => {
            let mut acc = cur.uniform_range(-0.5, 0.5);
            Label::new(
                (0..grid)
                    .map(|_| {
                        acc += cur.uniform() / grid as f64;
                        acc
                    })
                    .collect(),
            )
        }
        LabelSpace::PsdMatrix { dim } => {
            let b: Vec<f64> = (0..dim * dim).map(|_| cur.uniform_range(-1.0, 1.0)).collect();
            let mut m = vec![0.0; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    m[i * dim + j] = (0..dim).map(|k| b[i * dim + k] * b[j * dim + k]).sum();
                }
            }
            // exact symmetry
            for i in 0..dim {
                for j in 0..i {
                    m[i * dim + j] = m[j * dim + i];
                }
            }
            Label::new(m)
        }
    }
}

/// A random off-diagonal point in `space`.
pub fn random_point(space: &BirthDeathSpace, cur: &mut RngCursor) -> BirthDeath {
    loop {
        let p = BirthDeath::new(random_label(space.labels(), cur), random_label(space.labels(), cur));
        if !space.is_diagonal(&p) {
            return p;
        }
    }
}

/// A random nonnegative diagram with at most `max_points` expanded points.
pub fn random_nonneg(space: &BirthDeathSpace, cur: &mut RngCursor, max_points: u64) -> SignedDiagram {
    let count = cur.below(max_points + 1);
    let pts: Vec<BirthDeath> = (0..count).map(|_| random_point(space, cur)).collect();
    SignedDiagram::from_points(*space, pts).unwrap()
}

/// A random real nonnegative diagram on dyadic points, allowing repeats.
pub fn dyadic_nonneg(cur: &mut RngCursor, max_points: u64) -> SignedDiagram {
    let count = cur.below(max_points + 1);
    let mut pts: Vec<BirthDeath> = Vec::new();
    for _ in 0..count {
        if !pts.is_empty() && cur.bernoulli(0.25) {
            let i = cur.below(pts.len() as u64) as usize;
            pts.push(pts[i].clone());
        } else {
            pts.push(dyadic_point(cur));
        }
    }
    SignedDiagram::from_points(real_space(), pts).unwrap()
}

/// A random signed diagram with support at most `max_support`.
pub fn random_signed(space: &BirthDeathSpace, cur: &mut RngCursor, max_support: u64) -> SignedDiagram {
    let count = cur.below(max_support + 1);
    let entries: Vec<(BirthDeath, i64)> = (0..count)
        .map(|_| {
            let n = 1 + cur.below(2) as i64;
            let sign = if cur.bernoulli(0.5) { 1 } else { -1 };
            (random_point(space, cur), sign * n)
        })
        .collect();
    SignedDiagram::from_entries(*space, entries).unwrap()
}

/// `W₁` by enumerating every partial matching of the expanded points; each
/// unmatched point goes to the diagonal.
pub fn brute_force_w1(alpha: &SignedDiagram, beta: &SignedDiagram) -> f64 {
    let space = alpha.space();
    let a = alpha.expanded_points().unwrap();
    let b = beta.expanded_points().unwrap();
    fn rec(
        space: &BirthDeathSpace,
        a: &[&BirthDeath],
        b: &[&BirthDeath],
        i: usize,
        used: &mut Vec<bool>,
        acc: f64,
        best: &mut f64,
    ) {
        if i == a.len() {
            let rest: f64 = b
                .iter()
                .zip(used.iter())
                .filter(|(_, u)| !**u)
                .map(|(p, _)| space.distance_to_diagonal(p))
                .sum();
            *best = best.min(acc + rest);
            return;
        }
        rec(space, a, b, i + 1, used, acc + space.distance_to_diagonal(a[i]), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                rec(space, a, b, i + 1, used, acc + space.strengthened_distance(a[i], b[j]), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(&space, &a, &b, 0, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

/// `ρ` via the brute-force matching of `(g - h)₊` against `(g - h)₋`.
pub fn brute_force_rho(g: &SignedDiagram, h: &SignedDiagram) -> f64 {
    let k = g.checked_sub(h).unwrap();
    brute_force_w1(&k.positive_part(), &k.negative_part())
}

/// Minimum number of open `epsilon`-balls centred at input points covering
/// all of them, by trying every subset of centres.
pub fn exhaustive_cover(n: usize, epsilon: f64, dist: impl Fn(usize, usize) -> f64) -> usize {
    assert!(n <= 16);
    (1u32..(1 << n))
        .filter(|&mask| (0..n).all(|x| (0..n).any(|c| mask & (1 << c) != 0 && dist(c, x) < epsilon)))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap_or(0)
}

/// Rank over GF(2) by dense Gaussian elimination.
pub fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= *y);
            }
        }
        rank += 1;
    }
    rank
}

/// H₁ index pairs `(birth, Some(death) | None)` of a filtration from the
/// persistent Betti numbers `β^{i,j} = z₁(K_i) - dim(B₁(K_j) ∩ C₁(K_i))`,
/// each computed by dense GF(2) ranks, and inclusion–exclusion.
pub fn h1_pairs_by_rank(complex: &FilteredComplex) -> Vec<(usize, Option<usize>)> {
    let s = complex.simplices();
    let total = s.len();
    let edges: Vec<usize> = (0..total).filter(|&i| s[i].dim() == 1).collect();
    let tris: Vec<usize> = (0..total).filter(|&i| s[i].dim() == 2).collect();
    let verts: Vec<usize> = (0..total).filter(|&i| s[i].dim() == 0).collect();
    let contains = |outer: usize, inner: usize| s[inner].vertices.iter().all(|v| s[outer].vertices.contains(v));

    // z₁(K_i): edges present minus rank of their vertex boundary
    let z1 = |i: usize| -> usize {
        let present: Vec<usize> = edges.iter().copied().filter(|&e| e <= i).collect();
        let rows: Vec<Vec<bool>> = present.iter().map(|&e| verts.iter().map(|&v| contains(e, v)).collect()).collect();
        present.len() - gf2_rank(rows)
    };
    // rows: triangles of K_j, columns: a subset of edges
    let d2_rank = |j: usize, edge_filter: &dyn Fn(usize) -> bool| -> usize {
        let cols: Vec<usize> = edges.iter().copied().filter(|&e| edge_filter(e)).collect();
        let rows: Vec<Vec<bool>> = tris
            .iter()
            .filter(|&&t| t <= j)
            .map(|&t| cols.iter().map(|&e| contains(t, e)).collect())
            .collect();
        if cols.is_empty() {
            0
        } else {
            gf2_rank(rows)
        }
    };
    let beta = |i: isize, j: usize| -> isize {
        if i < 0 {
            return 0;
        }
        let i = i as usize;
        let full = d2_rank(j, &|_| true);
        let outside = d2_rank(j, &|e| e > i);
        z1(i) as isize - (full as isize - outside as isize)
    };
    let mut out = Vec::new();
    for b in 0..total {
        let bi = b as isize;
        for d in (b + 1)..total {
            let mu = beta(bi, d - 1) - beta(bi - 1, d - 1) - beta(bi, d) + beta(bi - 1, d);
            for _ in 0..mu {
                out.push((b, Some(d)));
            }
        }
        let last = total - 1;
        let mu = beta(bi, last) - beta(bi - 1, last);
        for _ in 0..mu {
            out.push((b, None));
        }
    }
    out
}
