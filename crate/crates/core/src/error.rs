//! Error type shared across the library.

use std::path::PathBuf;

/// Errors produced by channel math, density evolution, graph construction,
/// power models, and the optimizer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument was outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A channel-spec operation was called in the wrong mode
    /// (abstract vs. physical).
    #[error("channel mode error: {0}")]
    Mode(String),

    /// A bound or closed form was requested outside the regime in which it
    /// is established.
    #[error("regime error: {0}")]
    Regime(String),

    /// No decoding threshold exists for the rule/degree combination.
    #[error("no threshold: rule does not converge even at p0 = {p0:e}")]
    NoThreshold { p0: f64 },

    /// The requested operation has no feasible solution.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A characterization-table lookup failed.
    #[error("missing table entry: {0}")]
    MissingEntry(String),

    /// A data file could not be parsed.
    #[error("parse error in {path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// I/O failure while reading or writing a data file.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
