//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by fallible operations.
///
/// Contract violations (length mismatches between values that were
/// constructed to match, out-of-range mask indices) are programming
/// errors and panic instead of returning a variant.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters, unsupported combinations, or a malformed
    /// configuration file.
    #[error("configuration error: {0}")]
    Config(String),

    /// A numerical guard tripped, e.g. convolution mass drifted beyond
    /// tolerance or a statistic came out non-finite.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Filesystem error while reading or writing an export.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
