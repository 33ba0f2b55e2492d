use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure stopped before meeting its tolerance. The partial
    /// value and its error estimate are kept so callers can still inspect them.
    #[error("accuracy target not met ({what}): value {value:e}, estimated error {err_est:e}")]
    Accuracy { what: String, value: f64, err_est: f64 },

    /// A kernel was evaluated exactly at one of its singular points.
    #[error("singular evaluation: {0}")]
    Singularity(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
