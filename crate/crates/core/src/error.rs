//! Error type shared across the crate.

use num_rational::BigRational;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors split into three classes: malformed input, violated mathematical
/// precondition (these carry an independently checkable witness), and
/// internal invariant failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} variables")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },

    #[error("variable index {var} out of range for {n} variables")]
    VariableOutOfRange { var: usize, n: usize },

    #[error("degree must be even, got {degree}")]
    OddDegree { degree: usize },

    #[error("operation is only defined for binary forms (n = 2), got n = {n}")]
    UnsupportedDimension { n: usize },

    #[error("matrix transvectant needs side >= 3, got side {side}")]
    MatrixTooSmall { side: usize },

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric at entry ({row},{col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix side {got} does not match the monomial basis size {expected}")]
    SideMismatch { expected: usize, got: usize },

    #[error("supplied matrix is not a Gram matrix of the target form")]
    GramMismatch,

    /// The witness w satisfies w^T Q w < 0 for the offending matrix Q.
    #[error("matrix is not positive semidefinite")]
    NotPsd { witness: Vec<BigRational> },

    /// The canonical Gram matrix of the factor named in `factor` failed the
    /// psd check; the witness certifies it.
    #[error("canonical Gram matrix of factor {factor} is not psd")]
    FactorGramNotPsd {
        factor: String,
        witness: Vec<BigRational>,
    },

    /// When available, `witness_point` is a rational point at which the form
    /// evaluates to a strictly negative value. Boxed to keep Result small.
    #[error("form is not nonnegative: {detail}")]
    NotNonnegative {
        detail: String,
        witness_point: Option<Box<(BigRational, BigRational)>>,
    },

    #[error("numeric Gram search failed: {0}; supply an exact Gram matrix instead")]
    NumericFailure(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Exit-code class used by callers that map errors onto a process status:
/// 1 = malformed input, 2 = mathematical precondition violated, 3 = bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    MalformedInput,
    PreconditionViolated,
    InternalBug,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::NotPsd { .. }
            | Error::FactorGramNotPsd { .. }
            | Error::NotNonnegative { .. }
            | Error::NumericFailure(_) => ErrorClass::PreconditionViolated,
            Error::Internal(_) => ErrorClass::InternalBug,
            _ => ErrorClass::MalformedInput,
        }
    }
}
