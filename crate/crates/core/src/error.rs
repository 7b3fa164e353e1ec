use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Quadrature or iteration failed to meet its tolerance within budget.
    /// `best` carries the last estimate so callers can still inspect it.
    #[error("{what} did not converge: best estimate {best:e}, error estimate {abs_error:e}")]
    Convergence {
        what: &'static str,
        best: f64,
        abs_error: f64,
    },

    #[error("eigensolver failed on matrix {matrix_index}: {reason}")]
    Eigensolver { matrix_index: u64, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
