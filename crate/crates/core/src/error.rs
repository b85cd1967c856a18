use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("sequence must contain at least one term")]
    EmptySequence,

    #[error("kernel must have at least one row and one column")]
    EmptyKernel,

    #[error("ragged matrix: row {row} has {found} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("order {order} out of range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("report covers orders up to {covered}, but order {needed} is required")]
    InsufficientOrder { needed: usize, covered: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sequence is {found}-modal, expected {expected}-modal")]
    ModalityMismatch { expected: usize, found: usize },

    #[error("zero denominator at index {index} (1-based)")]
    ZeroDenominator { index: usize },

    #[error("norm certificate failed: row-sum norm {row_norm}, column-sum norm {col_norm}; neither is below 1")]
    NormCertificate { row_norm: String, col_norm: String },

    #[error("singular system")]
    Singular,

    #[error("need at least {needed} history polynomials, got {found}")]
    InsufficientHistory { needed: usize, found: usize },

    #[error("input too large for exhaustive search: {0}")]
    TooLarge(String),

    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),

    #[error("claim falsified: {0}")]
    Falsified(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
