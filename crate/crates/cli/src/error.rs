use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Failures mapped to process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("{0}")]
    Core(#[from] pinch_core::Error),

    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },

    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } => 2,
            CliError::Core(pinch_core::Error::Domain { .. }) => 2,
            CliError::Core(pinch_core::Error::Validity { .. }) => 2,
            CliError::Refused(_) => 3,
            _ => 1,
        }
    }
}
