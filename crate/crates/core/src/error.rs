//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator spec: {0}")]
    UnknownGenerator(String),

    #[error("generation produced no points in the window")]
    EmptyWindow,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{context}: window escapes the trusted region of the sample")]
    UntrustedRegion { context: String },

    #[error("pattern radius {radius} exceeds the trusted margin {margin}")]
    RadiusExceedsMargin { radius: f64, margin: f64 },

    #[error("point lies outside the pattern support")]
    PointOutsideSupport,

    #[error("ball pattern must contain its center")]
    BallPatternWithoutCenter,

    #[error("decoration scale r={r} must stay below the packing radius {r_pack}")]
    ScaleViolation { r: f64, r_pack: f64 },

    #[error("decorated rule at scale r={rule_r} applied to a set decorated at r={set_r}")]
    ScaleMismatch { rule_r: f64, set_r: f64 },

    #[error("locality harness: inputs already differ inside the protected ball")]
    LocalityPrecondition,

    #[error("matrix dimension {0} exceeds the dense eigensolver cap {1}")]
    MatrixTooLarge(usize, usize),

    #[error("symmetric eigendecomposition failed to converge")]
    EigenFailure,

    #[error("boundary point {0} is not a site of the assembled operator")]
    BoundaryNotASite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
