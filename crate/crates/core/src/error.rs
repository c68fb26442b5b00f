//! Error type shared across the solver.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Bad construction argument (degenerate domain, non-positive count, ...).
    InvalidArgument(String),
    /// Field or vector dimensions do not match the expected grid.
    DimensionMismatch { expected: Vec<usize>, got: Vec<usize> },
    /// A sampled or computed value is NaN/inf.
    NonFinite(String),
    /// A required derivative callback was not supplied.
    MissingDerivative(&'static str),
    /// The time stepper produced a non-finite field.
    Instability { step: usize, time: f64 },
    /// Courant number at or above the stability limit under abort policy.
    CflExceeded { courant: f64, limit: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected:?}, got {got:?}")
            }
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
            Error::MissingDerivative(which) => {
                write!(f, "missing derivative callback: {which}")
            }
            Error::Instability { step, time } => {
                write!(f, "non-finite field at step {step} (t = {time:.6e}); run aborted")
            }
            Error::CflExceeded { courant, limit } => {
                write!(f, "Courant number {courant:.6} exceeds stability limit {limit:.6}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
