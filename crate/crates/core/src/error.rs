use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain where a map or formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A caller broke a documented precondition (e.g. queried a point that
    /// is not inside the domain).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("quadrature did not reach tolerance {requested:e}: achieved {achieved:e}")]
    Quadrature { requested: f64, achieved: f64 },

    #[error("{aborted} of {samples} walks exceeded the step cap (limit 0.1%)")]
    TooManyAborts { aborted: u64, samples: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn arg(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
