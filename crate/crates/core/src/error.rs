use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PicError {
    #[error("torsion invariant {0} must be at least 2")]
    BadInvariant(BigInt),
    #[error("torsion invariants must form a divisibility chain: {lower} does not divide {upper}")]
    NotDivisibilityChain { lower: BigInt, upper: BigInt },
    #[error("element shape does not match group: expected {expected} components, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("divisor must be positive, got {0}")]
    NonPositiveDivisor(BigInt),
    #[error("{0}")]
    Parse(String),
}

/// Syntax error in a bundle, matrix or ring expression.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        Self {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("a split bundle needs at least one summand")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitionError {
    #[error("transition matrix must be square and nonempty")]
    NotSquare,
    #[error("determinant {0} is not a nonzero monomial")]
    NonMonomialDeterminant(String),
    #[error("extension class has {found} coefficients, the Čech basis has {expected}")]
    ClassLength { expected: usize, found: usize },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("fiber dimension must be at least 1")]
    FiberDim,
    #[error("rings have different fiber dimensions {0} and {1}")]
    FiberMismatch(usize, usize),
    #[error(transparent)]
    Pic(#[from] PicError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
}
