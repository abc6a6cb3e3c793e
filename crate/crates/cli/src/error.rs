//! CLI failures and their exit codes (sysexits numbering).

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable JSON or values that fail validation.
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    NoInput { path: PathBuf, source: std::io::Error },
    /// Input data with the right shape but unusable content.
    #[error("{0}")]
    Data(String),
    #[error("cannot write {path}: {source}")]
    CantCreate { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Software(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Data(_) => 65,
            CliError::NoInput { .. } => 66,
            CliError::Software(_) => 70,
            CliError::CantCreate { .. } => 73,
        }
    }
}

impl From<polyrange::Error> for CliError {
    fn from(e: polyrange::Error) -> Self {
        use polyrange::Error as E;
        match e {
            E::Numerical(_) => CliError::Software(e.to_string()),
            E::NotIsometry { .. } => CliError::Data(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
