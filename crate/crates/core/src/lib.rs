//! Virtual persistence diagrams over metric pairs, Gaussian kernels on their
//! linearization, random Fourier features, and spectral graph filtrations.

pub mod error;
pub mod kernel;
pub mod metric;
pub mod rff;
pub mod rng;
pub mod topology;
pub mod vpd;

pub use error::{Error, Result};
