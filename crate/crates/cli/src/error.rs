use smhd::SmhdError;
use smhd_sim::SimError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] SmhdError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 1 for input and configuration errors, 3 for loss
    /// of positivity, 4 for a step-size violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Sim(SimError::PositivityLoss { .. }) => 3,
            Self::Sim(SimError::CflViolation(_)) => 4,
            _ => 1,
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Input(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
