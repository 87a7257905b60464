use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or input files.
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] vpdk::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 2 for user input, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) | Self::Parse { .. } => 2,
            Self::Io { source, .. } if source.kind() == std::io::ErrorKind::NotFound => 2,
            Self::Io { .. } | Self::Internal(_) => 1,
            Self::Core(e) => match e {
                vpdk::Error::Degenerate(_) | vpdk::Error::Generation(_) => 1,
                _ => 2,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Input(_) => "input",
            Self::Io { .. } => "io",
            Self::Parse { .. } => "parse",
            Self::Core(e) => match e {
                vpdk::Error::SpaceMismatch(_) => "space-mismatch",
                vpdk::Error::Structure(_) => "structure",
                vpdk::Error::Argument(_) => "argument",
                vpdk::Error::Capacity(_) => "capacity",
                vpdk::Error::Precondition(_) => "precondition",
                vpdk::Error::Degenerate(_) => "degenerate",
                vpdk::Error::Generation(_) => "generation",
            },
            Self::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
