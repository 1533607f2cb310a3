use std::path::PathBuf;

use floquet_core::Error as CoreError;

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const VALIDATION: i32 = 2;
    pub const IDENTITY: i32 = 3;
    pub const NUMERICAL: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read config {path}: {source}")]
    ConfigRead {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("potential failed validation: {0}")]
    Validation(String),
    #[error("{0}")]
    Identity(String),
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_)
            | CliError::ConfigRead { .. }
            | CliError::ConfigParse { .. }
            | CliError::Write { .. } => exit::USAGE,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Identity(_) => exit::IDENTITY,
            CliError::Numerical(_) => exit::NUMERICAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(p) => CliError::Usage(format!("potential: {p}")),
            CoreError::InvalidArgument(msg) => CliError::Usage(msg),
            CoreError::NonRealDiscriminant { energy, imag } => CliError::Identity(format!(
                "discriminant is not real at E = {energy} (|Im Δ| = {imag:e})"
            )),
            other => CliError::Numerical(other),
        }
    }
}
