//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by configuration validation, the field solvers, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation received an out-of-domain value.
    /// `field` names the offending key so CLI diagnostics can point at it.
    #[error("invalid value for `{field}`: {reason}")]
    InvalidInput {
        field: &'static str,
        reason: String,
    },

    /// A linear solve or the coupled stepping loop broke down.
    #[error("solver failure in {context}: {reason}")]
    Solver {
        context: &'static str,
        reason: String,
    },

    /// Malformed configuration file or preset/space lookup failure.
    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidInput {
            field,
            reason: reason.into(),
        }
    }

    pub fn solver(context: &'static str, reason: impl Into<String>) -> Self {
        Error::Solver {
            context,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
