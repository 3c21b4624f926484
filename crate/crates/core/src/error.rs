use thiserror::Error;

/// Errors raised by the distribution, fitting and selection routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or parameter vector lies outside its admissible domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computation would under/overflow double precision.
    #[error("overflow guard: {0}")]
    Overflow(String),
    /// A growth loop exceeded its hard cap.
    #[error("iteration cap exceeded: {0}")]
    IterationCap(String),
    /// Observed data are empty, degenerate or out of range.
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn data<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Data(msg.into()))
}
