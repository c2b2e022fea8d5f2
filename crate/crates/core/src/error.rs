use thiserror::Error;

use crate::lattice::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("DIM_ERROR: {0}")]
    Dim(String),

    #[error("NOT_IN_SUPPORT: no cone of the fan contains the given vectors")]
    NotInSupport,

    #[error("UNBOUNDED: the divisor polytope has a nonzero recession cone")]
    Unbounded,

    #[error("DIM_MISMATCH: expected rank {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("NOT_SEMIAMPLE: {0}")]
    NotSemiample(String),

    #[error("OUT_OF_RANGE: {0}")]
    OutOfRange(String),

    #[error("ROUTE_MISMATCH at (k={k}, l={l}): chow={chow}, count={count}, direct={direct}")]
    RouteMismatch {
        k: usize,
        l: usize,
        chow: i64,
        count: i64,
        direct: i64,
    },

    #[error("DEGREE_MISMATCH: {0}")]
    DegreeMismatch(String),

    #[error("PARSE_ERROR: {0}")]
    Parse(String),

    #[error("invalid fan: {0}")]
    InvalidFan(ValidationReport),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dim(_) => "DIM_ERROR",
            Error::NotInSupport => "NOT_IN_SUPPORT",
            Error::Unbounded => "UNBOUNDED",
            Error::DimMismatch { .. } => "DIM_MISMATCH",
            Error::NotSemiample(_) => "NOT_SEMIAMPLE",
            Error::OutOfRange(_) => "OUT_OF_RANGE",
            Error::RouteMismatch { .. } => "ROUTE_MISMATCH",
            Error::DegreeMismatch(_) => "DEGREE_MISMATCH",
            Error::Parse(_) => "PARSE_ERROR",
            Error::InvalidFan(report) => report
                .issues
                .first()
                .map(|issue| issue.kind.code())
                .unwrap_or("INVALID_FAN"),
        }
    }
}
