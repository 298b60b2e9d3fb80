use thiserror::Error;

/// Contract violations and arithmetic failures raised by the tree kernels.
///
/// Offending values are carried as decimal strings so the error type stays
/// independent of the integer backend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in 128-bit mode; rerun with --bigint")]
    Overflow,
    #[error("value must be at least 1")]
    Zero,
    #[error("expected an odd integer, got {0}")]
    NotOdd(String),
    #[error("expected an even integer, got {0}")]
    NotEven(String),
    #[error("2^{n} does not divide {value} + 1")]
    AscentNotIntegral { value: String, n: u32 },
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("{0} is not a parent-capable even integer (not of the form 3^N*h - 1)")]
    NotParentCapable(String),
    #[error("{0} is of the form 6a-3 and has no odd integer above it")]
    Flower(String),
    #[error("exponent vector does not give an exact division by 3")]
    InexactDivision,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
