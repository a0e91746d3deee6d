use thiserror::Error;

pub type Result<T, E = CountError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    /// An argument lies outside the domain of the function (n = 0, p not prime, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(
        "profile too short: need cyclotomic data through level {needed}, profile has {available}"
    )]
    ProfileTooShort { needed: u32, available: u32 },

    #[error("profile too short to determine xi: all {levels} cyclotomic levels are trivial")]
    XiUndetermined { levels: u32 },

    #[error("invalid profile: {}", .0.join("; "))]
    InvalidProfile(Vec<String>),

    /// A power would exceed the configured bit-length guard.
    #[error("magnitude limit: result would need about {bits} bits, limit is {limit}")]
    MagnitudeLimit { bits: u64, limit: u64 },

    #[error("resource limit: {0}")]
    Resource(String),

    /// A division that must be exact was not, or two routes that must agree did not.
    /// Seeing this means a formula is wrong, not that the input is.
    #[error("internal consistency fault: {0}")]
    Consistency(String),
}
