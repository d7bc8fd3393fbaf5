//! Harness around `loctab`: run configuration, CSV sweeps and the
//! verification suite behind the `loctab` binary.

pub mod checks;
pub mod config;
pub mod csv;
pub mod sweeps;
pub mod verify;

pub use config::RunConfig;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verification.md")]
mod book_verification {}

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Assertion(_) => EXIT_ASSERTION,
            _ => EXIT_CAPACITY,
        }
    }
}

impl From<loctab::Error> for HarnessError {
    fn from(e: loctab::Error) -> Self {
        match e {
            loctab::Error::Io(m) => HarnessError::Io(m),
            loctab::Error::Domain(m) => HarnessError::Config(m),
            other => HarnessError::Capacity(other.to_string()),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

/// Sizes the global rayon pool; later calls are ignored by rayon.
pub fn init_threads(cfg: &RunConfig) {
    if let Some(n) = cfg.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
