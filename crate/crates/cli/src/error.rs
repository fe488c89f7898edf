use std::process::ExitCode;

use thiserror::Error;

/// Failures of a CLI invocation, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(densub::Error),
    #[error("{0}")]
    Algorithm(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Algorithm(_) => 3,
        })
    }
}

impl From<densub::Error> for CliError {
    fn from(e: densub::Error) -> Self {
        use densub::Error as E;
        match e {
            E::Config(_) | E::InvalidParameter(_) | E::Infeasible(_) => CliError::Usage(e.to_string()),
            other => CliError::Data(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
