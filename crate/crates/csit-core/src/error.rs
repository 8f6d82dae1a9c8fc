//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    /// A matrix or tensor dimension is zero or inconsistent with its peers.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// A scenario or estimator parameter violates a precondition.
    #[error("invalid configuration for `{key}`: {reason}")]
    InvalidConfig { key: String, reason: String },

    /// Arguments are individually valid but mutually inconsistent.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Least squares requested with fewer measurements than unknowns.
    #[error("under-determined system: {measurements} measurements for {unknowns} unknowns")]
    UnderDetermined {
        measurements: usize,
        unknowns: usize,
    },

    /// NMSE is undefined when the reference channel has no energy.
    #[error("NMSE undefined: reference channel is identically zero")]
    ZeroReference,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed serialized artifact (pilot book, config file, ...).
    #[error("parse error: {0}")]
    Parse(String),
}

impl SimError {
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        SimError::InvalidConfig {
            key: key.into(),
            reason: reason.into(),
        }
    }
}
