use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps these to exit codes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degree out of range: {what} needs degree {degree} but the cutoff is {cutoff}")]
    DegreeOutOfRange {
        what: String,
        degree: usize,
        cutoff: usize,
    },

    #[error("no target: {0}")]
    NoTarget(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("ambiguous spectrum: eigenvalue {eigenvalue:e} lies in the band [{tol:e}, {upper:e}]")]
    AmbiguousSpectrum { eigenvalue: f64, tol: f64, upper: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }

    pub(crate) fn out_of_range(what: impl Into<String>, degree: usize, cutoff: usize) -> Self {
        Error::DegreeOutOfRange {
            what: what.into(),
            degree,
            cutoff,
        }
    }

    /// Process exit status used by the command line tool: 2 for bad input,
    /// 3 when a mathematical invariant failed to hold.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) | Error::AmbiguousSpectrum { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
