use smhd::SmhdError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("height {h} <= 0 in cell ({i}, {j}) at t = {t}")]
    PositivityLoss { i: usize, j: usize, t: f64, h: f64 },
    #[error("CFL violation: {0}")]
    CflViolation(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("initial data violate the linearized constraint: residual {residual:e} > {tolerance:e}")]
    ConstraintViolation { residual: f64, tolerance: f64 },
    #[error(transparent)]
    Core(#[from] SmhdError),
    #[error("cannot parse configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SimError>;
