use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("series diverges: ζ_D(z) needs z > {threshold}, got z = {z}")]
    Divergent { z: f64, threshold: f64 },
    #[error("smoothness r = {r} is out of range: the solution lies in H_r only for r < {bound}")]
    OutOfRegime { r: f64, bound: f64 },
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    #[error("matrix of size {size} exceeds the enumeration limit {max}")]
    SizeLimit { size: usize, max: usize },
    #[error("matrix is not symmetric (entry ({row}, {col}))")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },
    #[error("covariance factorization failed: {0}")]
    Factorization(String),
    #[error("evaluation failed at increment {index}: {message}")]
    Evaluation { index: usize, message: String },
}

pub type Result<T> = core::result::Result<T, Error>;
