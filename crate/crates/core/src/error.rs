//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of the library. The CLI maps them onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Caller misuse: wrong basis, missing period, bad flag combination.
    #[error("usage error: {0}")]
    Usage(String),
    /// Input outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Rank loss in an osculating or normal space.
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// The curve has a conformal vertex where a generic point is required.
    #[error("not generic at t = {0}")]
    NotGeneric(f64),
    /// Iterative or integration failure.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// A verification step produced a value outside its tolerance.
    #[error("consistency error: {what} (achieved {achieved:e}, tolerance {tol:e})")]
    Consistency { what: String, achieved: f64, tol: f64 },
}

impl Error {
    /// Process exit code: 1 usage, 2 domain, 3 numeric or consistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Domain(_) | Error::Degenerate(_) | Error::NotGeneric(_) => 2,
            Error::Numeric(_) | Error::Consistency { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
