use std::process::ExitCode;

use thiserror::Error;
use wehrl_core::Error as CoreError;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config files, f-specs or state files.
    #[error("{0}")]
    Validation(String),
    /// A dimension above the `--max-dim` guard.
    #[error("{0}")]
    Resource(String),
    /// A numerical routine failed on valid input.
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Self::Validation(_) => ExitCode::from(2),
            Self::Resource(_) => ExitCode::from(3),
            Self::Compute(_) | Self::Io(_) => ExitCode::from(1),
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let msg = e.to_string();
        match e {
            CoreError::Resource { .. } => Self::Resource(format!("{msg} (raise --max-dim to override)")),
            CoreError::Invalid(_)
            | CoreError::DimensionMismatch { .. }
            | CoreError::Overflow(_)
            | CoreError::NotNormalized { .. }
            | CoreError::NotDensity(_)
            | CoreError::Domain { .. }
            | CoreError::NotConcave { .. } => Self::Validation(msg),
            _ => Self::Compute(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
