use thiserror::Error;

/// Errors raised by the computations in this crate.
///
/// The variants split into two families: requests that fall outside the
/// range where a computation is valid ([`Error::InvalidSpec`],
/// [`Error::RangeViolation`], ...) and internal consistency failures
/// ([`Error::NotDivisible`], [`Error::Inconsistent`],
/// [`Error::MatchingFailure`]) which indicate that a mathematical check did
/// not hold.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid surface spec: {0}")]
    InvalidSpec(String),

    #[error("invalid stratum: {0}")]
    InvalidStratum(String),

    #[error("outside the verified range: {0}")]
    RangeViolation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point lies in the wrong chart: {0}")]
    BadChart(String),

    #[error("field characteristic {p} too small, need a prime above {needed}")]
    CharTooSmall { p: u64, needed: u64 },

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("inconsistent Gysin data: {0}")]
    Inconsistent(String),

    #[error("cancellation matching failed: {0}")]
    MatchingFailure(String),
}

impl Error {
    /// True for errors that signal a failed mathematical consistency check
    /// rather than a request outside the supported range.
    pub fn is_consistency_failure(&self) -> bool {
        matches!(
            self,
            Error::NotDivisible(_) | Error::Inconsistent(_) | Error::MatchingFailure(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
