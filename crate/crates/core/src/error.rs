use thiserror::Error;

/// Errors surfaced by the library. `Parse` and `Usage` are caller mistakes;
/// the rest are domain outcomes (inadmissible data, infeasible programs).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
    #[error("not a moment prefix of any measure on [{a}, {b}]: {reason} at index {index}")]
    NotAMomentPrefix {
        a: String,
        b: String,
        index: usize,
        reason: String,
    },
    #[error("sequence is not admissible: {reason} at index {index}")]
    NotAdmissible { index: usize, reason: String },
    #[error("constraint prefix is infeasible: {0}")]
    InfeasiblePrefix(String),
    #[error("tolerance not reached after {iterations} iterations (enclosure [{lo}, {hi}])")]
    ToleranceNotReached {
        iterations: usize,
        lo: String,
        hi: String,
    },
    #[error("linear program: {0}")]
    Lp(String),
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    /// True for errors caused by malformed invocations or input text.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Usage(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
