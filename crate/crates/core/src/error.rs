//! Error type shared by every module of the crate.

use alloc::string::String;
use core::fmt;

use crate::stream::ScoreKind;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong while configuring or driving a procedure.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A score was outside the range allowed for its kind.
    InvalidScore { kind: ScoreKind, value: f64 },
    /// A procedure received a score of the wrong kind, or a list mixed kinds.
    KindMismatch { expected: ScoreKind, found: ScoreKind },
    /// A 1-based hypothesis index was zero or past the end of the stream.
    IndexOutOfRange { index: usize, len: usize },
    /// A weight sequence failed validation.
    InvalidWeights(String),
    /// A numeric configuration value violated its documented range.
    InvalidParameter { name: &'static str, value: f64, reason: &'static str },
    /// An input that must be non-empty (or large enough) was not.
    EmptyInput(&'static str),
    /// Exhaustive enumeration was requested on an instance above the cap.
    InstanceTooLarge { len: usize, max: usize },
    /// The requested variant has no closed form / is not supported by the operation.
    Unsupported(&'static str),
    /// A root finder could not bracket or reach the requested residual.
    NoRoot { lo: f64, hi: f64, detail: &'static str },
    /// An audited run broke nestedness, self-consistency or domination.
    InvariantViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidScore { kind, value } => {
                write!(f, "{value} is not a valid {kind}")
            }
            Error::KindMismatch { expected, found } => {
                write!(f, "expected a {expected}, got a {found}")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} is outside 1..={len}")
            }
            Error::InvalidWeights(msg) => write!(f, "invalid weight sequence: {msg}"),
            Error::InvalidParameter { name, value, reason } => {
                write!(f, "invalid {name} = {value}: {reason}")
            }
            Error::EmptyInput(what) => write!(f, "{what}"),
            Error::InstanceTooLarge { len, max } => {
                write!(f, "instance of size {len} exceeds the enumeration cap {max}")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::NoRoot { lo, hi, detail } => {
                write!(f, "no root in [{lo}, {hi}]: {detail}")
            }
            Error::InvariantViolation(msg) => write!(f, "invariant violated: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name: "alpha", value: alpha, reason: "must lie in (0, 1]" })
    }
}
