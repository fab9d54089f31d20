use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A result would exceed the configured element budget.
    #[error("sizing error: {0}")]
    Sizing(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// An input violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Two routes that must agree did not.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
