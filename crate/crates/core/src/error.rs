use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the reconstruction library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: String, actual: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite values after step {step} in iteration {iteration}")]
    NonFinite { step: &'static str, iteration: usize },

    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },

    #[error("{path}: size mismatch, header declares {expected} bytes but data file has {actual}")]
    SizeMismatch {
        path: PathBuf,
        expected: u64,
        actual: u64,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, actual: impl ToString) -> Self {
        Error::Dimension {
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// `2` configuration/usage, `3` data or file format, `4` numeric failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::InvalidConfig(_) => 2,
            Error::Dimension { .. }
            | Error::Format { .. }
            | Error::SizeMismatch { .. }
            | Error::Io { .. } => 3,
            Error::NonFinite { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
