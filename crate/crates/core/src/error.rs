use alloc::string::String;

/// Errors raised while constructing, encoding or auditing a scheme.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown built-in scheme `{0}`")]
    UnknownBuiltin(String),
    #[error("symbol out of range: {0}")]
    Symbol(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
