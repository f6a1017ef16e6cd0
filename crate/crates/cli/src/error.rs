use std::path::PathBuf;

use hallforge_core::Error as CoreError;
use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cache I/O at {path}: {source}")]
    Cache {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cache entry {0} failed revalidation: {1}")]
    Revalidation(PathBuf, String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 0 ok, 1 verification failure, 2 invalid input, 3 budget exceeded.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::Budget(_)) => 3,
            CliError::Core(CoreError::Integrality(_) | CoreError::Undecidable) => 1,
            CliError::Revalidation(..) | CliError::Verification(_) => 1,
            _ => 2,
        }
    }
}
