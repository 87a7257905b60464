//! Spectral edge labelings of graphs and their H₁ persistence.
//!
//! Pipeline: [`watts_strogatz`] → [`SpectralData`] → [`label_edges`] →
//! [`build_filtration`] → [`persistence_h1`] → [`extract_vpd`].

mod filtration;
mod graph;
mod labeling;
mod persistence;
mod spectral;

pub use filtration::{build_filtration, FilteredComplex, Simplex};
pub use graph::{watts_strogatz, Graph, GraphRecord, MAX_GENERATION_ATTEMPTS};
pub use labeling::{label_edges, EdgeLabeling, LabelingKind, PROFILE_BASE_VERTEX, PROFILE_FLOOR};
pub use persistence::{
    essential_births, extract_vpd, group_pairs, persistence, persistence_h1, PersistenceOptions, PersistencePair,
};
pub use spectral::{SpectralData, ZERO_EIGENVALUE_TOLERANCE};
