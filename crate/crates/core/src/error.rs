use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Two objects live over different metric pairs or label spaces.
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),

    /// A label payload or structural input does not fit its declared space.
    #[error("invalid structure: {0}")]
    Structure(String),

    /// An argument lies outside its admissible range.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// An exact routine was asked to work beyond its enumeration cap.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A mathematical precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The input geometry makes a construction degenerate.
    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    /// A random construction did not succeed within its retry budget.
    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
