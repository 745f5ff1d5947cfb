use thiserror::Error;

use crate::chars::Char2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix is not in {0}")]
    NotInLevel(&'static str),
    #[error("characteristic {0} is odd")]
    OddCharacteristic(Char2),
    #[error("characteristic {0} is even")]
    EvenCharacteristic(Char2),
    #[error("imaginary part of tau is not positive definite")]
    NotPositiveDefinite,
    #[error("eps {eps:e} is below the {digits}-digit backend floor {floor:e}")]
    PrecisionExhausted { eps: f64, digits: u32, floor: f64 },
    #[error("character phase is not a multiple of 1/2 (eighths = {0})")]
    NotHalfInteger(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("sign search failed for {0}")]
    SignSearchFailed(String),
    #[error("certification failed: {0}")]
    CertificationFailed(String),
    #[error("every coordinate is below the numerical floor {floor:e}")]
    VanishingPoint { floor: f64 },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
