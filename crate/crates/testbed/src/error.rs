use thiserror::Error;

use crate::cache::CacheError;
use crate::ingest::IngestError;
use crate::registry::RegistryError;
use crate::sweep::SweepError;

/// Failure of a CLI command, grouped by category for the exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] lfe_core::Error),
    #[error("output: {0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Ingest(_) => 3,
            CliError::Registry(_) => 4,
            CliError::Sweep(SweepError::Registry(_)) => 4,
            CliError::Sweep(SweepError::Method { .. }) | CliError::Numerical(_) => 5,
            CliError::Sweep(SweepError::Io(_) | SweepError::Csv(_) | SweepError::Json(_)) => 7,
            CliError::Sweep(_) => 2,
            CliError::Cache(_) => 6,
            CliError::Io(_) | CliError::Json(_) => 7,
        }
    }

    pub fn category(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            3 => "input",
            4 => "registry",
            5 => "numerical",
            6 => "cache",
            _ => "output",
        }
    }
}
