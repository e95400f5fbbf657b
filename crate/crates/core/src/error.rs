use thiserror::Error;

/// Errors raised by the lattice, code and orbifold routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero in cyclotomic field")]
    CyclotomicDivisionByZero,

    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),

    #[error("matrix is singular")]
    Singular,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("lattice is not integral")]
    NotIntegral,

    #[error("lattice is not even")]
    NotEven,

    #[error("lattice has roots")]
    HasRoots,

    #[error("vector {index} is not contained in the target lattice")]
    NotContained { index: usize },

    #[error("vector does not lie in the rational span of the lattice")]
    NotInSpan,

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("matrix does not preserve the Gram matrix")]
    NotAnIsometry,

    #[error("isometry is not fixed-point free")]
    NotFixedPointFree,

    #[error("isometry order {0} is not prime")]
    OrderNotPrime(u64),

    #[error("isometry order exceeds {0}")]
    OrderTooLarge(u64),

    #[error("not a p-elementary quadratic space: {0}")]
    NotElementary(String),

    #[error("negative-norm relation: component is not a subdiagram of the extended A_{0} diagram")]
    NegativeNormRelation(usize),

    #[error("not an A_{{p-1}}^t configuration: {0}")]
    NotTypeAConfiguration(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("integer overflow during exact enumeration")]
    EnumerationOverflow,

    #[error("invariant mismatch: {0}")]
    InvariantMismatch(String),

    #[error("fixture data is corrupted: {0}")]
    CorruptFixture(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
