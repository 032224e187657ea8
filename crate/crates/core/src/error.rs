use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Not enough derivative values or Bell arguments were supplied.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Two independent computations of the same exact quantity disagreed.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    /// A value that must be an integer came out fractional.
    #[error("non-integral coefficient: {0}")]
    NonIntegral(String),

    /// The function has no Taylor expansion at the requested point.
    #[error("not expandable: {0}")]
    NotExpandable(String),

    /// The requested precision exceeds the configured oracle limit.
    #[error("precision infeasible: {requested} digits requested, limit is {limit}")]
    PrecisionInfeasible { requested: u32, limit: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
