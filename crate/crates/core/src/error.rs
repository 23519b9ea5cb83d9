use std::path::PathBuf;

use thiserror::Error;

use crate::sat::dimacs::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Ensemble parameters that cannot produce a k-SAT formula.
    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    /// An argument outside the domain of an operation (length mismatch, zero
    /// variables, negative inverse temperature, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    /// An exhaustive or dense operation refused to run because the instance
    /// is larger than its configured limit.
    #[error("{what} refused: n = {n} exceeds the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    /// A loaded result whose aggregates do not recompute from its records.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn limit(what: &'static str, n: usize, limit: usize) -> Self {
        Error::LimitExceeded { what, n, limit }
    }

    /// Process exit code for the CLI: 2 for resource-limit refusals, 1 for
    /// everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LimitExceeded { .. } => 2,
            _ => 1,
        }
    }
}
