use thiserror::Error;

/// Errors raised by constructions whose preconditions can fail.
///
/// Verification routines do not use this type for mathematical failures;
/// those are carried inside a [`crate::report::CheckReport`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("q(∂) must have zero constant term")]
    ConstantTerm,
    #[error("invalid family configuration: {0}")]
    InvalidConfig(String),
    #[error("moment table holds {available} moments but degree {needed} was requested")]
    InsufficientMoments { needed: usize, available: usize },
    #[error("contour passes through z = 0 for s = {s}; supply a detour radius")]
    ContourThroughOrigin { s: String },
    #[error("contour is degenerate for d = {0}")]
    DegenerateContour(usize),
    #[error("quadrature did not converge: estimate {estimate:e} above tolerance {tolerance:e}")]
    NonConvergence { estimate: f64, tolerance: f64 },
    #[error("raising step divides by s + 1 = 0 at s = {0}")]
    DivisionByZero(i64),
    #[error("truncation too shallow: {0}")]
    InsufficientDepth(String),
    #[error("degenerate basis: leading exponent {0} appears twice")]
    DegenerateBasis(i64),
    #[error("caps too small: {0}")]
    CapTooSmall(String),
    #[error("non-invertible leading coefficient in dressing: {0}")]
    NonInvertible(String),
    #[error("band overflow: degrees {0:?} fell outside the working band")]
    BandOverflow(Vec<i64>),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
