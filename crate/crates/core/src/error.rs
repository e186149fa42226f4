use thiserror::Error;

/// Errors raised by the exact arithmetic layer and the algorithms built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial of degree {0} is too small, degree must be at least 2")]
    DegreeTooSmall(usize),
    #[error("polynomial is reducible, found factor {factor}")]
    Reducible { factor: String },
    #[error("malformed polynomial `{input}`: {reason}")]
    PolynomialSyntax { input: String, reason: String },
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("field elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("embedding {0} is complex, a real embedding is required")]
    ComplexEmbedding(usize),
    #[error("embedding index {index} out of range for degree {degree}")]
    EmbeddingOutOfRange { index: usize, degree: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("basis polynomials are linearly dependent over the rationals")]
    DependentBasis,
    #[error("matrix determinant is {0}, expected +1 or -1")]
    NotUnimodular(String),
    #[error("matrix is singular")]
    Singular,
    #[error("comparison undecided at the precision cap of {0} bits")]
    PrecisionExhausted(u32),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no period found within {0} steps")]
    Inconclusive(usize),
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("characteristic polynomial is reducible over the rationals: {0}")]
    ReducibleCharPoly(String),
    #[error("not totally real: signature ({s}, {t}) gives a Dirichlet group of rank {rank}")]
    NotTotallyReal { s: usize, t: usize, rank: usize },
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
