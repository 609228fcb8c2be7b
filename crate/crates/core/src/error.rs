use std::io;

use thiserror::Error;

/// Failures reading a cached prime table.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("unsupported table header {found:?}, expected {expected:?}")]
    Version {
        found: String,
        expected: &'static str,
    },
    #[error("malformed table file at line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("checksum mismatch: file says {stored:08x}, records hash to {computed:08x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("table contents inconsistent with a fresh sieve: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{what} = {value} exceeds the table limit {limit}")]
    Range {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("unsupported function: {0}")]
    Unsupported(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
