use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),

    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix too large for an exact permanent: n = {0}, limit {1}")]
    PermanentTooLarge(usize, usize),

    #[error("state is not normalized: norm = {0}")]
    NotNormalized(f64),

    #[error("Bloch vector is not unit length: |r| = {0}")]
    NotUnitBloch(f64),

    #[error("invalid ket multiset: {0}")]
    InvalidMultiset(String),

    #[error("dimension {0} is not prime")]
    NonPrime(usize),

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("iteration did not converge after {iterations} steps (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
