use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// KEX text could not be parsed; `line` is 1-based.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("agent {agent} out of range 1..={agents}")]
    UnknownAgent { agent: usize, agents: usize },

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("seed has {got} bits, expected {expected}")]
    SeedWidth { expected: u32, got: u32 },

    #[error("invalid symmetric difference: {0}")]
    InvalidDifference(String),

    #[error("invalid hidden set: {0}")]
    InvalidHiddenSet(String),

    #[error("invalid component: {0}")]
    InvalidComponent(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("invalid mechanism config: {0}")]
    InvalidConfig(String),

    /// A size guard refused the request.
    #[error("{what} too large: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    /// An internal guarantee failed. Always a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
