use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("overflow: {0}")]
    Overflow(String),

    /// A numerical procedure stopped before reaching its tolerance. The
    /// partial estimate is kept so callers can decide whether to use it.
    #[error("{what} did not converge (estimate {estimate:e}, error {error:e})")]
    NonConvergence { what: &'static str, estimate: f64, error: f64 },

    #[error("exact evaluation needs {required} integrals, budget is {budget}")]
    ComplexityBudget { required: u64, budget: u64 },

    #[error("failed to parse `{key}`: {message}")]
    Parse { key: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }

    /// Short machine-readable tag, used in CLI error records and FFI codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "invalid_config",
            Error::Domain(_) => "domain",
            Error::Overflow(_) => "overflow",
            Error::NonConvergence { .. } => "non_convergence",
            Error::ComplexityBudget { .. } => "complexity_budget",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
