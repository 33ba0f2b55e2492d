use thiserror::Error;

/// Failures surfaced to the command line, each with its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, flag combinations, or argument values.
    #[error("{0}")]
    Usage(String),

    /// A numerical routine did not reach its tolerance or hit a singularity.
    #[error(transparent)]
    Numerical(khavinson_core::Error),

    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Output(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Numerical(_) => "numerical",
            CliError::Output(_) => "output",
        }
    }

    /// One-line JSON diagnostic for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        })
        .to_string()
    }
}

impl From<khavinson_core::Error> for CliError {
    fn from(e: khavinson_core::Error) -> Self {
        match e {
            // domain errors come from user-supplied values
            khavinson_core::Error::Domain(msg) => CliError::Usage(msg),
            other => CliError::Numerical(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
