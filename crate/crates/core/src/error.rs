use thiserror::Error;

/// Errors raised by the numerical operations of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector is not admissible here")]
    ZeroVector,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("operation requires a convex domain")]
    NonConvexDomain,
    #[error("operation requires a domain symmetric about the origin")]
    AsymmetricDomain,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("finite-difference step leaves the domain")]
    StepExitsDomain,
    #[error("no admissible path between the endpoints")]
    NoPath,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: v.len(),
        })
    }
}
