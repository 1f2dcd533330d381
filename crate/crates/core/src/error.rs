use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical kernel failed to converge or produced a non-finite value.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Two refinement levels of a quadrature disagree by more than the tolerance.
    #[error("quadrature not converged: coarse {coarse:e}, fine {fine:e} (relative change {rel_change:e} > {tolerance:e})")]
    NotConverged {
        coarse: f64,
        fine: f64,
        rel_change: f64,
        tolerance: f64,
    },

    /// A Loewner step would reorder the tips; the caller retries with a smaller step.
    #[error("step rejected: {0}")]
    StepRejected(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) => 2,
            Error::Numeric(_) | Error::NotConverged { .. } | Error::StepRejected(_) => 3,
            Error::Io(_) | Error::Json(_) => 1,
        }
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Numeric(_) => "numeric",
            Error::NotConverged { .. } => "not_converged",
            Error::StepRejected(_) => "step_rejected",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
