use thiserror::Error;

use crate::surfdsl::DslError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate bivector")]
    DegenerateBivector,

    #[error("form is not homogeneous")]
    NotHomogeneous,

    #[error("grade mismatch: {left} vs {right}")]
    GradeMismatch { left: usize, right: usize },

    #[error("vertices are not coplanar (deviation {deviation:e} exceeds {tolerance:e})")]
    NonCoplanar { deviation: f64, tolerance: f64 },

    #[error("plane normal is not a unit vector (norm {0})")]
    NonUnitNormal(f64),

    #[error("surface not closed")]
    SurfaceNotClosed,

    #[error("open curve")]
    OpenCurve,

    #[error("subdivision limit not reached (last n = {last_n}, last delta = {last_delta:e})")]
    NotConverged { last_n: usize, last_delta: f64 },

    #[error("projection direction grazes the plane")]
    GrazingDirection,

    #[error("index undefined on the curve")]
    IndexUndefined,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Schema(String),

    #[error(transparent)]
    Dsl(#[from] DslError),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
