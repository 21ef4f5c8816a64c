//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by dataset ingestion, neighbor search and estimation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed magic number, header or truncated payload.
    #[error("malformed {format} file {path}: {detail}")]
    Format {
        format: &'static str,
        path: PathBuf,
        detail: String,
    },

    /// Rows or images whose shapes disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A precondition on parameters was violated (k >= n, m > n, d > N, ...).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// A selection (class filter, component restriction) produced no rows.
    #[error("empty selection: {0}")]
    EmptySelection(String),

    /// Two identical rows met during neighbor search; the estimators are
    /// undefined at zero distance. Deduplicate the dataset first.
    #[error("zero distance between rows {a} and {b}; deduplicate the dataset first")]
    ZeroDistance { a: usize, b: usize },

    /// The computation is degenerate on this input (all estimates infinite,
    /// all regression radii equal, disconnected neighbor graph, ...).
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(
        format: &'static str,
        path: impl Into<PathBuf>,
        detail: impl Into<String>,
    ) -> Self {
        Error::Format {
            format,
            path: path.into(),
            detail: detail.into(),
        }
    }
}
