use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmhdError {
    #[error("fluid height must be positive, got h = {0}")]
    NonPositiveHeight(f64),
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("gravitational acceleration must be positive, got g = {0}")]
    InvalidGravity(f64),
    #[error("downstream height equals upstream height ({0}); no shock")]
    DegenerateHeight(f64),
    #[error("invalid height ratio R = {0} (need R > 0, R != 1)")]
    InvalidRatio(f64),
    #[error("invalid magnetic field: {0}")]
    InvalidField(&'static str),
    #[error("Froude window violated: M1 = {m1}, M = {m}, M* = {mstar}")]
    LaxViolation { m1: f64, m: f64, mstar: f64 },
    #[error("state pair is not a shock wave (classified as {0})")]
    NotAShock(String),
    #[error("classification is ambiguous: {0}")]
    AmbiguousClassification(String),
    #[error("both tangential magnetic fields vanish")]
    ZeroTangentialField,
    #[error("heights differ across the sheet: h+ = {plus}, h- = {minus}")]
    HeightMismatch { plus: f64, minus: f64 },
    #[error("tangential fields are not antisymmetric: B2+ = {plus}, B2- = {minus}")]
    NotSymmetricCase { plus: f64, minus: f64 },
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
}

pub type Result<T> = std::result::Result<T, SmhdError>;
