//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error enum. Variants are coarse on purpose: each message
/// carries the concrete context (dimension names, offending values) so
/// callers can surface them directly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A dimension argument was out of its valid range or inconsistent with
    /// another dimension.
    #[error("invalid dimensions: {0}")]
    Dims(String),
    /// A numeric argument violated a domain requirement (negativity,
    /// non-finiteness, positivity required by a family, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// Matrix shapes do not line up for the requested operation.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// Exact rational arithmetic overflowed machine integers.
    #[error("rational overflow while computing {0}")]
    Overflow(&'static str),
    /// Not enough usable data to carry out an estimation step.
    #[error("insufficient data: {0}")]
    Insufficient(String),
    /// An estimator or sampler configuration is invalid.
    #[error("invalid configuration: {0}")]
    Config(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
