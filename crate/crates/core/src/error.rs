use thiserror::Error;

/// Errors raised by the library.
///
/// `Domain` covers inputs outside an operation's mathematical domain (a
/// probability level outside (0,1), a center outside the admissible
/// interval). `Quadrature` and `Root` cover algorithms that ran but could
/// not certify their answer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "quadrature did not converge: estimated error {achieved:e} exceeds tolerance {requested:e}"
    )]
    Quadrature { achieved: f64, requested: f64 },

    #[error("root finding failed: {0}")]
    Root(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("problem too large: {what} = {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("invalid specification: {0}")]
    Spec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
