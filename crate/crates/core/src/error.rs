use thiserror::Error;

/// Errors raised across the crate.
///
/// Each variant maps onto one process exit code in the command-line front end
/// (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A CSV row could not be parsed.
    #[error("parse error at row {row}: {message}")]
    Parse { row: u64, message: String },

    /// The data cannot be represented by the requested model.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A closed-form or numerical estimate does not exist for the data.
    #[error("no estimate: {0}")]
    NoEstimate(String),

    /// The intercept and slope cannot be separated because every x1 is equal.
    #[error("non-identifiable: {0}")]
    NonIdentifiable(String),

    /// A numerical search did not reach its tolerance.
    #[error("non-convergence: {0}")]
    NonConvergence(String),

    /// Too many bootstrap replicates failed to fit.
    #[error("unreliable bootstrap: {failed} of {total} replicates failed to fit")]
    UnreliableBootstrap { failed: usize, total: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit code: 2 for domain and parse errors, 3 for infeasibility,
    /// 4 for non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse { .. } | Error::Io(_) => 2,
            Error::Infeasible(_) | Error::NoEstimate(_) | Error::NonIdentifiable(_) => 3,
            Error::NonConvergence(_) | Error::UnreliableBootstrap { .. } => 4,
        }
    }

    /// Short name of the error kind, used in structured output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Parse { .. } => "parse",
            Error::Infeasible(_) => "infeasible",
            Error::NoEstimate(_) => "no_estimate",
            Error::NonIdentifiable(_) => "non_identifiable",
            Error::NonConvergence(_) => "non_convergence",
            Error::UnreliableBootstrap { .. } => "unreliable_bootstrap",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
