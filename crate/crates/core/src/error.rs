use thiserror::Error;

/// Errors raised by the inference, preprocessing and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("too few observations: got {got}, need at least {need}")]
    TooFewObservations { got: usize, need: usize },

    #[error("non-finite value at index {idx}: {value}")]
    NonFinite { idx: usize, value: f64 },

    #[error("constant input: the variable carries no information")]
    ConstantInput,

    #[error("singular covariance matrix")]
    SingularCovariance,

    #[error("ragged sample: row {row} has dimension {got}, expected {expected}")]
    RaggedSample {
        row: usize,
        got: usize,
        expected: usize,
    },

    #[error("argument outside the function's domain: {0}")]
    Domain(&'static str),

    #[error("not a probability vector: {0}")]
    NotNormalized(&'static str),

    #[error("support mismatch at index {0}: p > 0 where q = 0")]
    SupportMismatch(usize),

    #[error("every spacing is zero")]
    AllTied,

    #[error("no consecutive pair has both differences nonzero")]
    NoValidSpacings,

    #[error("reference family {0} is not supported by this operation")]
    InvalidReference(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("renormalized trace is not positive: {0}")]
    NonPositiveTrace(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("least-squares fit is rank deficient (condition number {0:e})")]
    SingularFit(f64),

    #[error("rejection sampler stalled after {0} consecutive rejections")]
    SamplingStalled(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
