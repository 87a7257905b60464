use std::collections::BTreeMap;

use serde::Serialize;

use super::filtration::FilteredComplex;
use crate::error::Result;
use crate::metric::{BirthDeath, BirthDeathSpace, Label};
use crate::vpd::SignedDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PersistenceOptions {
    /// Keep pairs whose birth and death scalars coincide.
    pub keep_zero_persistence: bool,
    /// Also report H₀.
    pub include_h0: bool,
}

/// A birth–death pair read off the reduced boundary matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth_index: usize,
    pub death_index: Option<usize>,
    pub birth_scalar: f64,
    /// `None` for essential classes.
    pub death_scalar: Option<f64>,
    pub birth_label: Label,
    pub death_label: Option<Label>,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death_index.is_none()
    }

    pub fn scalar_persistence(&self) -> f64 {
        self.death_scalar.map_or(f64::INFINITY, |d| d - self.birth_scalar)
    }
}

/// Column reduction over GF(2); returns `low[j]` for each reduced column.
fn reduce(complex: &FilteredComplex) -> Vec<Option<usize>> {
    let positions = complex.positions();
    let n = complex.simplices().len();
    let mut columns: Vec<Vec<usize>> = (0..n).map(|j| complex.boundary(j, &positions)).collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut low = vec![None; n];
    for j in 0..n {
        let mut col = std::mem::take(&mut columns[j]);
        while let Some(&l) = col.last() {
            match owner[l] {
                Some(k) => col = symmetric_difference(&col, &columns[k]),
                None => break,
            }
        }
        if let Some(&l) = col.last() {
            owner[l] = Some(j);
            low[j] = Some(l);
        }
        columns[j] = col;
    }
    low
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Persistence pairs in H₁ (and H₀ behind the flag), ordered by birth index.
///
/// Birth and death labels are the representative labels of the paired
/// simplices. An H₀ class is born at its vertex with the label of that
/// vertex's smallest-scalar incident edge; isolated vertices are skipped.
pub fn persistence(complex: &FilteredComplex, opts: PersistenceOptions) -> Result<Vec<PersistencePair>> {
    complex.validate()?;
    let low = reduce(complex);
    let simplices = complex.simplices();
    let n = simplices.len();
    let mut killer: Vec<Option<usize>> = vec![None; n];
    for (j, l) in low.iter().enumerate() {
        if let Some(l) = *l {
            killer[l] = Some(j);
        }
    }
    // first incident edge in filtration order, per vertex
    let mut first_edge: Vec<Option<usize>> = vec![None; n];
    for (i, s) in simplices.iter().enumerate() {
        if s.dim() == 1 {
            for &v in &s.vertices {
                first_edge[v].get_or_insert(i);
            }
        }
    }
    let space = complex.space();
    let mut out = Vec::new();
    for (i, s) in simplices.iter().enumerate() {
        // creators are the columns that reduce to zero
        if low[i].is_some() {
            continue;
        }
        let dim = s.dim();
        let (birth_label, birth_scalar) = match dim {
            1 => {
                let l = complex.label(i).expect("edges carry labels").clone();
                (l, s.scalar)
            }
            0 if opts.include_h0 => {
                // vertex positions coincide with vertex indices
                let Some(e) = first_edge[s.vertices[0]] else { continue };
                let l = complex.label(e).expect("edges carry labels").clone();
                let x = space.scalarize(&l);
                (l, x)
            }
            _ => continue,
        };
        let (death_index, death_scalar, death_label) = match killer[i] {
            Some(j) => (Some(j), Some(simplices[j].scalar), complex.label(j).cloned()),
            None => (None, None, None),
        };
        if !opts.keep_zero_persistence && death_scalar == Some(birth_scalar) {
            continue;
        }
        out.push(PersistencePair {
            dim,
            birth_index: i,
            death_index,
            birth_scalar,
            death_scalar,
            birth_label,
            death_label,
        });
    }
    Ok(out)
}

/// H₁ pairs with zero-persistence pairs dropped.
pub fn persistence_h1(complex: &FilteredComplex) -> Result<Vec<PersistencePair>> {
    persistence(complex, PersistenceOptions::default())
}

/// Counts identical finite `(birth, death)` label pairs.
pub fn group_pairs(pairs: &[PersistencePair]) -> BTreeMap<BirthDeath, i64> {
    let mut out = BTreeMap::new();
    for p in pairs {
        if let Some(d) = &p.death_label {
            *out.entry(BirthDeath::new(p.birth_label.clone(), d.clone())).or_insert(0) += 1;
        }
    }
    out
}

/// Nonnegative diagram of the finite pairs; essential classes are skipped.
pub fn extract_vpd(pairs: &[PersistencePair], space: BirthDeathSpace) -> Result<SignedDiagram> {
    SignedDiagram::from_entries(space, group_pairs(pairs))
}

/// Birth labels of the essential classes.
pub fn essential_births(pairs: &[PersistencePair]) -> Vec<Label> {
    pairs.iter().filter(|p| p.is_essential()).map(|p| p.birth_label.clone()).collect()
}
