use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidParameter(String),
    /// The requested computation would exceed an explicit resource limit.
    ResourceLimit(String),
    /// A gap list does not carry the completeness guarantee required for an
    /// exact bridge: every gap of length at least `required_len` must be
    /// present.
    IncompleteGaps { required_len: crate::scalar::Rational },
    /// A refinement/search budget ran out before the target was certified.
    DepthExhausted(String),
    /// A thickness condition (Newhouse or Hunt-Kan-Yorke) failed.
    /// The message names the failing inequality.
    ConditionViolation(String),
    /// Every candidate was excluded by the avoid list.
    Exhausted(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(m) => write!(f, "invalid parameter: {m}"),
            Error::ResourceLimit(m) => write!(f, "resource limit exceeded: {m}"),
            Error::IncompleteGaps { required_len } => {
                write!(f, "gap list incomplete: all gaps of length >= {required_len} required")
            }
            Error::DepthExhausted(m) => write!(f, "depth budget exhausted: {m}"),
            Error::ConditionViolation(m) => write!(f, "thickness condition violated: {m}"),
            Error::Exhausted(m) => write!(f, "candidates exhausted: {m}"),
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}
