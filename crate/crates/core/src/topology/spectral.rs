use nalgebra::{DMatrix, SymmetricEigen};

use super::graph::Graph;
use crate::error::{Error, Result};

/// Eigenvalues at or below this count as zero.
pub const ZERO_EIGENVALUE_TOLERANCE: f64 = 1e-9;

/// Sorted eigendecomposition `L = V Λ Vᵀ` of the combinatorial Laplacian.
#[derive(Debug, Clone)]
pub struct SpectralData {
    laplacian: DMatrix<f64>,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralData {
    pub fn new(graph: &Graph) -> Self {
        let n = graph.vertex_count();
        let mut l: DMatrix<f64> = DMatrix::zeros(n, n);
        for &(u, v) in graph.edges() {
            l[(u, v)] -= 1.0;
            l[(v, u)] -= 1.0;
            l[(u, u)] += 1.0;
            l[(v, v)] += 1.0;
        }
        let eig = SymmetricEigen::new(l.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Self {
            laplacian: l,
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn vertex_count(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `‖L - VΛVᵀ‖_∞` (entrywise maximum).
    pub fn reconstruction_residual(&self) -> f64 {
        let lambda = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues.clone()));
        let rebuilt = &self.eigenvectors * lambda * self.eigenvectors.transpose();
        (&self.laplacian - rebuilt).amax()
    }

    /// `‖VᵀV - I‖_∞`.
    pub fn orthonormality_residual(&self) -> f64 {
        let n = self.vertex_count();
        (self.eigenvectors.transpose() * &self.eigenvectors - DMatrix::identity(n, n)).amax()
    }

    /// Smallest nonzero eigenvalue `λ₁`.
    pub fn spectral_gap(&self) -> Result<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .find(|&l| l > ZERO_EIGENVALUE_TOLERANCE)
            .ok_or_else(|| Error::Degenerate("Laplacian has no nonzero eigenvalue".into()))
    }

    /// Heat time scales `{0.5, 1, 2} / λ₁`.
    pub fn time_scales(&self) -> Result<[f64; 3]> {
        let gap = self.spectral_gap()?;
        Ok([0.5 / gap, 1.0 / gap, 2.0 / gap])
    }

    /// `(L⁺)_vv = Σ_{λ_i > 0} V_vi² / λ_i`.
    pub fn pseudoinverse_diagonal(&self) -> Vec<f64> {
        let n = self.vertex_count();
        (0..n)
            .map(|v| {
                self.eigenvalues
                    .iter()
                    .enumerate()
                    .filter(|(_, &l)| l > ZERO_EIGENVALUE_TOLERANCE)
                    .map(|(i, &l)| self.eigenvectors[(v, i)].powi(2) / l)
                    .sum()
            })
            .collect()
    }

    /// `(e^{-sL})_{uv}`.
    pub fn heat_entry(&self, s: f64, u: usize, v: usize) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| (-s * l).exp() * self.eigenvectors[(u, i)] * self.eigenvectors[(v, i)])
            .sum()
    }

    /// Heat kernel diagonal `(e^{-sL})_{vv}` for every vertex.
    pub fn heat_diagonal(&self, s: f64) -> Vec<f64> {
        (0..self.vertex_count()).map(|v| self.heat_entry(s, v, v)).collect()
    }
}
