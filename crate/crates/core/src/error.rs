use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    Input(String),
    /// A checked mathematical invariant failed.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// Input is well formed but outside the supported class (e.g. residually irreducible).
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// An enumeration would exceed its budget.
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }

    /// Process exit code used by the command line runner.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 1,
            Error::Input(_) | Error::Unsupported(_) => 2,
            Error::Budget(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
