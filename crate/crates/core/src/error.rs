use thiserror::Error;

/// Every failure mode of the certified pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("divisor interval contains zero")]
    DivisorContainsZero,
    #[error("interval crosses the branch cut of {0}")]
    BranchCutCrossed(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("monotonicity violation: {0}")]
    MonotonicityViolation(String),
    #[error("positivity failure: {0}")]
    PositivityFailure(String),
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("inconsistent bracket: {0}")]
    InconsistentBracket(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("subdivision too coarse: {0}")]
    SubdivisionTooCoarse(String),
    #[error("a priori constants not verified: {0}")]
    Unverified(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
