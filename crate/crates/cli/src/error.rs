use std::process::ExitCode;

use catalyst_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    /// Internal or I/O failure, or a gate check that ran but missed its target.
    Failure = 1,
    Validation = 2,
    /// Truncation or overlap failure.
    PhysicsValidity = 3,
}

impl From<ExitStatus> for ExitCode {
    fn from(s: ExitStatus) -> Self {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read spec file {path}: {source}")]
    ReadSpec { path: String, source: std::io::Error },

    #[error("invalid spec file: {0}")]
    Spec(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::ReadSpec { .. } | CliError::Spec(_) => ExitStatus::Validation,
            CliError::Core(e) => core_status(e),
            CliError::Write { .. } | CliError::Csv(_) => ExitStatus::Failure,
        }
    }
}

pub fn core_status(e: &CoreError) -> ExitStatus {
    match e {
        CoreError::InvalidParameter { .. } | CoreError::InvalidConfig(_) | CoreError::DimensionMismatch { .. } => {
            ExitStatus::Validation
        }
        CoreError::Truncation { .. } | CoreError::CutoffTooSmall { .. } | CoreError::OverlapCheck { .. } => {
            ExitStatus::PhysicsValidity
        }
        CoreError::NotHermitian { .. } | CoreError::NotComposable(_) => ExitStatus::Failure,
    }
}
