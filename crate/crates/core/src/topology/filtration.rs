use std::cmp::Ordering;
use std::collections::HashMap;

use super::graph::Graph;
use super::labeling::EdgeLabeling;
use crate::error::{Error, Result};
use crate::metric::{Label, LabelSpace};

/// A simplex of the clique 2-skeleton.
#[derive(Debug, Clone, PartialEq)]
pub struct Simplex {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// Filtration value; `-∞` for vertices.
    pub scalar: f64,
    /// Edge index whose label represents this simplex, `None` for vertices.
    pub edge: Option<usize>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Lower-star clique filtration, totalized by `(scalar, edge key)`.
///
/// Vertices come first. Edges follow in order of scalarized label with
/// lexicographic tie-break, and each triangle enters right after its last
/// edge, carrying that edge's scalar and label.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    space: LabelSpace,
    edge_labels: Vec<Label>,
    simplices: Vec<Simplex>,
}

impl FilteredComplex {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn space(&self) -> LabelSpace {
        self.space
    }

    /// Representative label of a simplex; `None` for vertices.
    pub fn label(&self, index: usize) -> Option<&Label> {
        self.simplices[index].edge.map(|e| &self.edge_labels[e])
    }

    pub fn edge_label(&self, edge: usize) -> &Label {
        &self.edge_labels[edge]
    }

    pub fn count(&self, dim: usize) -> usize {
        self.simplices.iter().filter(|s| s.dim() == dim).count()
    }

    /// Raw construction for callers that need to test validation.
    pub fn from_parts(space: LabelSpace, edge_labels: Vec<Label>, simplices: Vec<Simplex>) -> Result<Self> {
        let c = Self {
            space,
            edge_labels,
            simplices,
        };
        c.validate()?;
        Ok(c)
    }

    /// Boundary of simplex `index`, as sorted positions in the order.
    pub fn boundary(&self, index: usize, positions: &HashMap<Vec<usize>, usize>) -> Vec<usize> {
        let vs = &self.simplices[index].vertices;
        if vs.len() == 1 {
            return Vec::new();
        }
        let mut out: Vec<usize> = (0..vs.len())
            .map(|skip| {
                let face: Vec<usize> = vs.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &v)| v).collect();
                positions[&face]
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn positions(&self) -> HashMap<Vec<usize>, usize> {
        self.simplices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.vertices.clone(), i))
            .collect()
    }

    /// Faces precede cofaces and filtration values never decrease along faces.
    pub fn validate(&self) -> Result<()> {
        let positions = self.positions();
        if positions.len() != self.simplices.len() {
            return Err(Error::Structure("repeated simplex in filtration".into()));
        }
        for (i, s) in self.simplices.iter().enumerate() {
            if s.vertices.is_empty() || s.vertices.len() > 3 || s.vertices.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Structure(format!("malformed simplex {:?}", s.vertices)));
            }
            if s.dim() == 0 {
                continue;
            }
            for skip in 0..s.vertices.len() {
                let face: Vec<usize> = s.vertices.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
                match positions.get(&face) {
                    Some(&j) if j < i => {
                        if self.simplices[j].scalar.partial_cmp(&s.scalar) == Some(Ordering::Greater) {
                            return Err(Error::Structure(format!(
                                "face {face:?} enters after coface {:?} in filtration value",
                                s.vertices
                            )));
                        }
                    }
                    _ => {
                        return Err(Error::Structure(format!(
                            "face {face:?} does not precede {:?}",
                            s.vertices
                        )))
                    }
                }
            }
        }
        Ok(())
    }
}

/// Builds the filtration of the clique 2-skeleton from an edge labeling.
pub fn build_filtration(graph: &Graph, labeling: &EdgeLabeling) -> Result<FilteredComplex> {
    let edges = graph.edges();
    if labeling.labels.len() != edges.len() {
        return Err(Error::Structure(format!(
            "{} labels for {} edges",
            labeling.labels.len(),
            edges.len()
        )));
    }
    let scalars = labeling.scalars();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| scalars[a].total_cmp(&scalars[b]).then(edges[a].cmp(&edges[b])));
    let mut rank = vec![0usize; edges.len()];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }

    let mut closing: Vec<Vec<Vec<usize>>> = vec![Vec::new(); edges.len()];
    for (a, b, c) in graph.triangles() {
        let sides = [(a, b), (a, c), (b, c)].map(|(u, v)| graph.edge_index(u, v).expect("triangle side"));
        let last = *sides.iter().max_by_key(|&&e| rank[e]).expect("three sides");
        closing[last].push(vec![a, b, c]);
    }

    let mut simplices: Vec<Simplex> = (0..graph.vertex_count())
        .map(|v| Simplex {
            vertices: vec![v],
            scalar: f64::NEG_INFINITY,
            edge: None,
        })
        .collect();
    for &e in &order {
        let (u, v) = edges[e];
        simplices.push(Simplex {
            vertices: vec![u, v],
            scalar: scalars[e],
            edge: Some(e),
        });
        for t in closing[e].drain(..) {
            simplices.push(Simplex {
                vertices: t,
                scalar: scalars[e],
                edge: Some(e),
            });
        }
    }
    FilteredComplex::from_parts(labeling.space, labeling.labels.clone(), simplices)
}
