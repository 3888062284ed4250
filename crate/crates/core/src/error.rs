use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("bounds error: {0}")]
    Bounds(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("channel error: {0}")]
    Channel(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
