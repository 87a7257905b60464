//! Single-linkage dendrograms over diagram classes and the basepoint.
//!
//! Merge heights are single-linkage distances under `d₁`, so the induced
//! ultrametric is the subdominant ultrametric of `d₁` on the leaf set.

use serde::Serialize;

use super::diagram::SignedDiagram;
use crate::metric::{BirthDeath, BirthDeathSpace, Label, MetricPair, QuotientPoint};

#[derive(Debug, Clone, PartialEq)]
pub struct DendrogramLeaf {
    pub point: QuotientPoint,
    pub multiplicity: i64,
    pub name: String,
}

/// Merge of clusters `a` and `b`. Leaves are `0..n`, merge `i` creates `n + i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Merge {
    pub a: usize,
    pub b: usize,
    pub height: f64,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    leaves: Vec<DendrogramLeaf>,
    merges: Vec<Merge>,
}

#[derive(Serialize)]
struct DendrogramJson<'a> {
    leaves: Vec<&'a str>,
    merges: &'a [Merge],
}

impl Dendrogram {
    pub fn leaves(&self) -> &[DendrogramLeaf] {
        &self.leaves
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Row-major matrix of `u(i, j)`, the height at which `i` and `j` join.
    pub fn ultrametric(&self) -> Vec<f64> {
        let n = self.leaves.len();
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut u = vec![0.0; n * n];
        for m in &self.merges {
            let (left, right) = (&members[m.a], &members[m.b]);
            for &i in left {
                for &j in right {
                    u[i * n + j] = m.height;
                    u[j * n + i] = m.height;
                }
            }
            let joined = [left.as_slice(), right.as_slice()].concat();
            members.push(joined);
        }
        u
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(DendrogramJson {
            leaves: self.leaves.iter().map(|l| l.name.as_str()).collect(),
            merges: &self.merges,
        })
        .expect("dendrogram serializes")
    }

    /// Newick string with branch lengths measured as height differences.
    pub fn to_newick(&self) -> String {
        let n = self.leaves.len();
        if n == 0 {
            return ";".into();
        }
        let root = n + self.merges.len() - 1;
        let mut out = String::new();
        self.write_node(root, &mut out);
        out.push(';');
        out
    }

    fn height(&self, node: usize) -> f64 {
        let n = self.leaves.len();
        if node < n {
            0.0
        } else {
            self.merges[node - n].height
        }
    }

    fn write_node(&self, node: usize, out: &mut String) {
        let n = self.leaves.len();
        if node < n {
            out.push('\'');
            out.push_str(&self.leaves[node].name.replace('\'', "''"));
            out.push('\'');
            return;
        }
        let m = self.merges[node - n];
        out.push('(');
        for (k, child) in [m.a, m.b].into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            self.write_node(child, out);
            out.push_str(&format!(":{}", m.height - self.height(child)));
        }
        out.push(')');
    }
}

/// Single linkage over explicit leaves.
///
/// Edges are merged in order of `(d₁, i, j)`, so equal heights resolve
/// deterministically.
pub fn single_linkage_dendrogram(space: &BirthDeathSpace, leaves: Vec<DendrogramLeaf>) -> Dendrogram {
    let n = leaves.len();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((space.quotient_distance(&leaves[i].point, &leaves[j].point), i, j));
        }
    }
    edges.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));

    let mut parent: Vec<usize> = (0..n).collect();
    let mut cluster: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut merges = Vec::with_capacity(n.saturating_sub(1));
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (h, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        let (ca, cb) = (cluster[ri].min(cluster[rj]), cluster[ri].max(cluster[rj]));
        let total = size[ri] + size[rj];
        parent[rj] = ri;
        size[ri] = total;
        cluster[ri] = n + merges.len();
        merges.push(Merge {
            a: ca,
            b: cb,
            height: h,
            size: total,
        });
        if merges.len() + 1 == n {
            break;
        }
    }
    Dendrogram { leaves, merges }
}

/// Ceiling used to render infinite deaths: twice the largest scalarized
/// label, or that maximum plus one when it is not positive.
pub fn default_ceiling(space: &BirthDeathSpace, diagram: &SignedDiagram, essential_births: &[Label]) -> f64 {
    let labels = space.labels();
    let max = diagram
        .support()
        .flat_map(|p| [&p.birth, &p.death])
        .chain(essential_births)
        .map(|l| labels.scalarize(l))
        .fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        1.0
    } else if max <= 0.0 {
        max + 1.0
    } else {
        2.0 * max
    }
}

/// Dendrogram over `[A]`, the finite classes of `diagram`, and the essential
/// classes rendered at `(birth, ceiling)`.
pub fn diagram_dendrogram(diagram: &SignedDiagram, essential_births: &[Label], ceiling: Option<f64>) -> Dendrogram {
    let space = diagram.space();
    let labels = space.labels();
    let ceiling = ceiling.unwrap_or_else(|| default_ceiling(&space, diagram, essential_births));
    let name = |p: &BirthDeath, n: i64, essential: bool| {
        let death = if essential {
            "inf".to_string()
        } else {
            format!("{:.4}", labels.scalarize(&p.death))
        };
        let suffix = if n == 1 { String::new() } else { format!(" x{n}") };
        format!("({:.4}, {death}){suffix}", labels.scalarize(&p.birth))
    };
    let mut leaves = vec![DendrogramLeaf {
        point: QuotientPoint::Basepoint,
        multiplicity: 1,
        name: "[A]".into(),
    }];
    for (p, n) in diagram.entries() {
        leaves.push(DendrogramLeaf {
            point: QuotientPoint::Point(p.clone()),
            multiplicity: *n,
            name: name(p, *n, false),
        });
    }
    let top = labels.constant_label(ceiling);
    for b in essential_births {
        let p = BirthDeath::new(b.clone(), top.clone());
        leaves.push(DendrogramLeaf {
            name: name(&p, 1, true),
            point: QuotientPoint::Essential(p),
            multiplicity: 1,
        });
    }
    single_linkage_dendrogram(&space, leaves)
}
