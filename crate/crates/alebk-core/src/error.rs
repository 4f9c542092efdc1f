use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors surfaced by the core pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Tensor or parameter shapes do not line up; the message carries the
    /// offending shape report.
    ShapeMismatch(String),
    /// An argument is outside its documented domain.
    InvalidInput(String),
    /// An input collection that must be non-empty is empty.
    Empty(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ShapeMismatch(msg) => write!(f, "shape mismatch: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::Empty(what) => write!(f, "empty input: {what}"),
        }
    }
}

impl core::error::Error for Error {}
