use thiserror::Error;

/// Errors raised by the lattice operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("form description has rank 0")]
    EmptyForm,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("form is degenerate (determinant 0)")]
    Degenerate,
    #[error("form is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("definite form: {0}")]
    Definite(&'static str),
    #[error("even form with signature {0} is not realizable (signature must be 0 mod 8)")]
    NonRealizable(i64),
    #[error("zero vector is not allowed here")]
    ZeroVector,
    #[error("reflection vector is isotropic")]
    IsotropicReflection,
    #[error("reflection is not integral on basis vector {basis_index}")]
    NonIntegralReflection { basis_index: usize },
    #[error("matrix is not an isometry of the form")]
    NotAnIsometry,
    #[error("isometries act on different forms")]
    FormMismatch,
    #[error("unsupported form shape: {0}")]
    UnsupportedShape(String),
    #[error("parameters (a, b) must be coprime")]
    NotCoprime,
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
