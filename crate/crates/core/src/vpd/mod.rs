//! Virtual persistence diagrams and the metrics on them.

mod assignment;
mod covering;
mod dendrogram;
mod diagram;
mod wasserstein;

pub use assignment::{assignment_cost, solve_assignment};
pub use covering::{covering_number, covering_number_with, CoverMode, EXACT_COVER_LIMIT};
pub use dendrogram::{
    default_ceiling, diagram_dendrogram, single_linkage_dendrogram, Dendrogram, DendrogramLeaf, Merge,
};
pub use diagram::SignedDiagram;
pub use wasserstein::{
    grothendieck_rho, optimal_matching, wasserstein1, wasserstein1_with_cap, MatchedPair, Matching,
    DEFAULT_MAX_EXPANDED_POINTS,
};
