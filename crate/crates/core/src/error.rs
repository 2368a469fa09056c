//! Error types shared across the crate.

use crate::dsl::ParseError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The input data does not describe a structure of the requested kind
    /// (bad dimensions, failed closure, violated construction equations).
    #[error("structural error: {0}")]
    Structural(String),

    /// An enumeration or table would exceed a configured bound.
    #[error("resource bound exceeded: {0}")]
    Resource(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Two internal computations that a theorem forces to agree did not.
    /// This always signals a library bug, never bad input.
    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
