use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (max deviation {deviation:.3e}, tolerance {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("not a valid density matrix: {0}")]
    InvalidState(String),

    #[error("correlation amplitude |alpha| = {magnitude} exceeds the positivity bound {bound}")]
    AlphaOutOfBounds { magnitude: f64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(
        "support of rho is not contained in support of sigma: eigenvector {index} of sigma \
         (eigenvalue {eigenvalue:.3e}) carries weight {weight:.3e}"
    )]
    SupportViolation {
        index: usize,
        eigenvalue: f64,
        weight: f64,
    },

    #[error("configuration rejected:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
