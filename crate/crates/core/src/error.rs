use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the engine.
///
/// [`Error::category`] groups them the way the command line reports them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("reducible modulus")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {0} does not belong to this field")]
    ForeignElement(u32),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("jet too short: need {need} coefficients, got {got}")]
    ShortJet { need: usize, got: usize },
    #[error("leading jet coefficient must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("curve coincides with a branch component")]
    BranchComponent,
    #[error("cover is unramified along T=0 after normalization")]
    Unramified,
    #[error("{0}")]
    Domain(String),
    #[error("enumeration of {size} points exceeds cap {cap}")]
    EnumerationCap { size: u128, cap: u128 },
    #[error("verification failed: {0}")]
    Verification(String),
}

/// Coarse classification of [`Error`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Precision,
    Domain,
    Verification,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Precision(_) | Error::ShortJet { .. } => ErrorCategory::Precision,
            Error::Verification(_) => ErrorCategory::Verification,
            _ => ErrorCategory::Domain,
        }
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
