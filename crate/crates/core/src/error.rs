use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("matrix is not invertible")]
    Singular,
    #[error("element does not lie in the Lie algebra")]
    NotInAlgebra,
    #[error("vector does not lie in the span of the subspace basis")]
    NotInSpan,
    #[error("unsupported algebra family: {0}")]
    UnsupportedFamily(String),
    #[error("nilpotent element is zero")]
    ZeroElement,
    #[error("ad_h has non-integral or missing eigenvalues")]
    NonIntegralWeights,
    #[error("sl2-triple is not even")]
    NotEven,
    #[error("element has the wrong ad_h weight (expected {0})")]
    WrongWeight(i32),
    #[error("element is not in the preimage of the slice")]
    NotInSlicePreimage,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("position normalization is not supported for this connection")]
    UnsupportedPosition,
    #[error("connection is not an oper: {0}")]
    NotAnOper(String),
    #[error("scalar must be nonzero")]
    ZeroScalar,
    #[error("invalid partition: {0}")]
    BadPartition(String),
    #[error("coefficient violates the required symmetry: {0}")]
    SymmetryViolation(String),
    #[error("Hitchin map requires lambda = 0")]
    LambdaNonzero,
    #[error("triple is not principal")]
    NotPrincipal,
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
