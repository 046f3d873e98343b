//! Error type shared by every evaluation routine.

use std::fmt;

/// Errors raised by evaluation, verification and sweep routines.
#[derive(Debug, Clone)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    Domain(String),
    /// The value has a pole or a zero denominator at the requested point.
    Singularity(String),
    /// A series or product failed to truncate within `max_terms`.
    Resource(String),
    /// A certified bound is only available past an explicit gate
    /// (e.g. `2 q^{n/2} / (1 - q) < 1`) and the gate is not met.
    Regime(String),
    /// Inconsistent configuration (theorem/nome-rule mismatch, empty grid, ...).
    Config(String),
    /// I/O failure while writing reports.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Singularity(m) => write!(f, "singularity: {m}"),
            Error::Resource(m) => write!(f, "resource limit: {m}"),
            Error::Regime(m) => write!(f, "regime gate: {m}"),
            Error::Config(m) => write!(f, "configuration error: {m}"),
            Error::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
