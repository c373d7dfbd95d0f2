use thiserror::Error;

/// Errors raised by the numerical and geometric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (negative time,
    /// radius beyond the injectivity radius, ...).
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// Malformed input: too few samples, non-monotone grids, non-positive
    /// values where logarithms are taken.
    #[error("invalid argument to {op}: {msg}")]
    Argument { op: &'static str, msg: String },

    /// An iterative procedure stopped before reaching its tolerance. The best
    /// value found and its error estimate are carried along.
    #[error("{op} did not converge: best value {best:e}, error estimate {estimate:e}")]
    NonConvergence { op: &'static str, best: f64, estimate: f64 },

    /// The requested quantity is not available for this model.
    #[error("{op} is not supported for {model}")]
    Capability { op: &'static str, model: String },

    /// Two independent routes to the same quantity disagree.
    #[error("{op}: routes disagree ({a:e} vs {b:e}, allowed {allowed:e})")]
    Consistency { op: &'static str, a: f64, b: f64, allowed: f64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn argument(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Argument { op, msg: msg.into() }
    }

    /// Name of the operation that failed.
    pub fn operation(&self) -> &'static str {
        match self {
            Error::Domain { op, .. }
            | Error::Argument { op, .. }
            | Error::NonConvergence { op, .. }
            | Error::Capability { op, .. }
            | Error::Consistency { op, .. } => op,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
