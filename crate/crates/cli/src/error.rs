use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(dicke_core::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }
}

impl From<dicke_core::Error> for CliError {
    /// Bad inputs become config errors; solver breakdowns are numerical.
    fn from(err: dicke_core::Error) -> Self {
        use dicke_core::Error as E;
        match err {
            E::BracketFailure { .. }
            | E::ConvergenceFailure { .. }
            | E::NotARoot { .. }
            | E::PoleHit { .. }
            | E::EigenConvergence { .. } => CliError::Numerical(err),
            other => CliError::Config(other.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
