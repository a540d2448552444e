use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} needs {needed} units, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("gcd({a}, {q}) != 1")]
    NotCoprime { a: i64, q: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("solver did not converge: {reason}")]
    NoConvergence {
        reason: String,
        best: Option<Box<crate::ncmax::MaxNormCertificate>>,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("shell cache count mismatch: header says {header}, expected {expected}")]
    CountMismatch { header: u64, expected: u64 },

    #[error("config key `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
