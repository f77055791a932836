use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a numerical routine.
    #[error("{func}: argument out of domain ({detail})")]
    Domain { func: &'static str, detail: String },

    /// A `SystemConfig` invariant does not hold. The message names it.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The multinomial expansion would enumerate more terms than allowed.
    #[error("composition count {count} exceeds the configured cap of {cap}")]
    CompositionCap { count: u128, cap: u128 },

    /// The requested evaluator does not exist for this parameterization.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("series or continued fraction in {0} did not converge")]
    NoConvergence(&'static str),

    #[error("{0}")]
    Io(String),
}

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        func,
        detail: detail.into(),
    }
}
