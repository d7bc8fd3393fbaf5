use thiserror::Error;

/// Errors raised by the exact counters and the verification checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A table, grid or enumeration would exceed its configured budget.
    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity { what: &'static str, needed: u128, limit: u128 },
    /// An argument lies outside the range covered by a precomputed table.
    #[error("{value} is outside the supported range 1..={limit}")]
    OutOfRange { value: u128, limit: u128 },
    /// An argument violates a mathematical precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// Checked integer arithmetic overflowed.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by exhausted budgets rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::OutOfRange { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
