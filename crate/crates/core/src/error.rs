use crate::scalar::Field;

/// Errors surfaced by the exact kernels and the constructors.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("alphabet mismatch: expected {expected}, got {got}")]
    AlphabetMismatch { expected: &'static str, got: &'static str },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("characteristic {p} too small for degree {degree}")]
    CharacteristicTooSmall { p: u64, degree: u32 },
    #[error("contraction degree underflow: {top} by {bottom}")]
    DegreeUnderflow { top: u32, bottom: u32 },
    #[error("exterior step overflow: {step} exceeds {max}")]
    StepOverflow { step: usize, max: usize },
    #[error("{0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
