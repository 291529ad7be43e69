//! Error type of the drivers and CLI.

use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the experiment drivers, file formats and CLI.
#[derive(Debug, Error)]
pub enum CliError {
    /// Error from the numerical core.
    #[error(transparent)]
    Core(#[from] fri2d_core::Error),
    /// Core error raised inside a Monte-Carlo trial.
    #[error("trial {trial}: {source}")]
    Trial {
        /// Zero-based trial index.
        trial: usize,
        /// Underlying error.
        source: fri2d_core::Error,
    },
    /// Inconsistent or incomplete configuration.
    #[error("configuration: {0}")]
    Config(String),
    /// File could not be read or written.
    #[error("{}: {source}", path.display())]
    Io {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// Malformed JSON.
    #[error("{}: {source}", path.display())]
    Json {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: serde_json::Error,
    },
    /// Malformed CSV.
    #[error("{}: {source}", path.display())]
    Csv {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: csv::Error,
    },
}

impl CliError {
    /// Process exit code: 3 for numerical degeneracies, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Trial { source: e, .. } if e.is_numerical() => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// Result alias for this crate.
pub type Result<T, E = CliError> = std::result::Result<T, E>;
