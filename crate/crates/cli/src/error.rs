use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Domain(#[from] landau_coherent::Error),

    #[error("verification failed: {failed} of {total} checks exceeded tolerance")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Process exit status: 2 for bad input, 1 for IO, 3 for a failed verification.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Domain(_) => 2,
            CliError::File { .. } | CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
            CliError::VerifyFailed { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
