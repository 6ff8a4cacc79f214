use std::path::PathBuf;

use thiserror::Error;

/// Process exit status for a configuration problem.
pub const EXIT_CONFIG: u8 = 2;
/// Process exit status for a numerical or precondition failure.
pub const EXIT_NUMERIC: u8 = 3;
/// Process exit status when the report cannot be written.
pub const EXIT_IO: u8 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("numeric error: {0}")]
    Numeric(#[from] carleman_core::Error),
    #[error("cannot write report: {0}")]
    Write(#[from] std::io::Error),
    #[error("cannot write csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::ReadConfig { .. } => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Write(_) | CliError::Csv(_) => EXIT_IO,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
