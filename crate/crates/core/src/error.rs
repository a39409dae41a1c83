use thiserror::Error;

/// Errors produced by parsing, fitting, and routing.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data, with the 1-based line it was found on.
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    /// A domain invariant was violated (bad coefficients, degenerate
    /// queries, unbalanced designs, out-of-range parameters).
    #[error("{0}")]
    Invalid(String),

    /// The routing constraints admit no assignment.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The regression design matrix is rank deficient.
    #[error("singular design matrix: {0}")]
    Singular(String),

    /// Too few observations for the requested statistic.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Guard against exhaustive enumeration of oversized instances.
    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: u64, reason: impl Into<String>) -> Self {
        Error::Parse {
            line,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(reason: impl Into<String>) -> Self {
        Error::Invalid(reason.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
