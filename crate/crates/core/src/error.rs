use thiserror::Error;

/// Errors raised by the model, the characteristic computations and the checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The instance cannot be evaluated (e.g. `+inf - inf` at a point).
    #[error("degenerate instance: {0}")]
    Degenerate(String),

    /// Adaptive quadrature ran out of panels before reaching its tolerance.
    /// Carries the best available estimate.
    #[error(
        "quadrature did not converge after {panels} panels \
         (estimate {estimate:e}, error estimate {error_estimate:e})"
    )]
    Quadrature {
        estimate: f64,
        error_estimate: f64,
        panels: usize,
    },

    #[error("no admissible `{checker}` instance after {attempts} attempts")]
    Generation { checker: String, attempts: usize },

    #[error("unknown checker `{0}`")]
    UnknownChecker(String),

    #[error("malformed instance: {0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}
