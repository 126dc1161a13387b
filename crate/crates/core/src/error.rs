use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not unimodular (det = {det})")]
    NotUnimodular { det: i128 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("rank vanishes: c*theta + d = {0}")]
    ZeroRank(f64),
    #[error("rank vanishes at the target parameter: {0}")]
    ZeroRankTarget(f64),
    #[error("degree of the Hom label is zero")]
    DegenerateDegree,
    #[error("outside the domain: {0}")]
    DomainError(String),
    #[error("series failed to converge: {0}")]
    ConvergenceError(String),
    #[error("integrand is not integrable: {0}")]
    NonIntegrable(String),
    #[error("singular value gap too small to decide the rank")]
    IndeterminateRank,
    #[error("twist lies too close to the lattice to decide membership")]
    LatticeBoundary,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}
