use thiserror::Error;

/// Errors raised by table construction, special-function evaluation and the
/// sum/error-term machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} = {value} is outside the available range 1..={limit}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        limit: u64,
    },

    #[error("backend mismatch: {0}")]
    BackendMismatch(String),

    #[error("zeta has a pole at 1")]
    Pole,

    #[error("argument {0} is outside the supported range")]
    Unsupported(f64),

    #[error("term budget exceeded: {needed} inner iterations > budget {budget}")]
    Budget { needed: u128, budget: u128 },

    #[error("unknown selector `{0}`")]
    UnknownSelector(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
