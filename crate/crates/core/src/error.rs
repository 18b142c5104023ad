use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("dimension {n} exceeds the maximum of {max}")]
    DimensionOverflow { n: u32, max: u32 },

    #[error("family is not upward closed")]
    NotUpwardClosed,

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("invalid bias {0}: must lie in the allowed range")]
    InvalidBias(String),

    #[error("invalid density {0}")]
    InvalidDensity(String),

    #[error("invalid rho {0}: must lie strictly between 0 and 1")]
    InvalidRho(String),

    #[error("invalid tolerance {0}: must be positive")]
    InvalidTolerance(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("target count {target} is outside the reachable range {low}..={high}")]
    TargetUnreachable { target: u64, low: u64, high: u64 },

    #[error("pool violates closure: {0}")]
    ClosureViolation(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid rational {0:?}")]
    Rational(String),

    #[error("invalid poset: {0}")]
    Poset(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
