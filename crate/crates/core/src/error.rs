use thiserror::Error;

/// Every failure mode surfaced by the laboratory.
///
/// The variant name doubles as the stable error tag written into report
/// notes (see [`SdlError::name`]).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SdlError {
    #[error("quadrature did not reach tolerance within {max_depth} subdivisions (estimate {estimate:e}, error {error:e})")]
    NonConvergent {
        estimate: f64,
        error: f64,
        max_depth: usize,
    },
    #[error("integrand is not finite at x = {at:e}")]
    NonFinite { at: f64 },
    #[error("unsupported complex dimension {0}")]
    UnsupportedDimension(usize),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("point {point:e} lies outside the interval ({lo:e}, {hi:e})")]
    DomainViolation { point: f64, lo: f64, hi: f64 },
    #[error("matrix is not Hermitian positive definite")]
    NotPositiveDefinite,
    #[error("weight is not integrable against monomials of degree {degree}")]
    NonIntegrableWeight { degree: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("constraint system infeasible at truncation degree {degree} (residual {residual:e})")]
    InfeasibleTruncation { degree: usize, residual: f64 },
    #[error("reduced system is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("bad rank {rank}: must lie in 1..={max}")]
    BadRank { rank: usize, max: usize },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("parameter too close to a singular value: {0}")]
    NumericalDomain(String),
}

impl SdlError {
    pub fn name(&self) -> &'static str {
        match self {
            SdlError::NonConvergent { .. } => "NonConvergent",
            SdlError::NonFinite { .. } => "NonFinite",
            SdlError::UnsupportedDimension(_) => "UnsupportedDimension",
            SdlError::UnknownName(_) => "UnknownName",
            SdlError::BadParameter(_) => "BadParameter",
            SdlError::DomainViolation { .. } => "DomainViolation",
            SdlError::NotPositiveDefinite => "NotPositiveDefinite",
            SdlError::NonIntegrableWeight { .. } => "NonIntegrableWeight",
            SdlError::DimensionMismatch { .. } => "DimensionMismatch",
            SdlError::InfeasibleTruncation { .. } => "InfeasibleTruncation",
            SdlError::IllConditioned { .. } => "IllConditioned",
            SdlError::UnknownCase(_) => "UnknownCase",
            SdlError::BadRank { .. } => "BadRank",
            SdlError::ConstraintViolated(_) => "ConstraintViolated",
            SdlError::NumericalDomain(_) => "NumericalDomain",
        }
    }
}

pub type Result<T> = std::result::Result<T, SdlError>;
