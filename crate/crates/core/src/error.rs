use thiserror::Error;

use crate::arith::{fmt_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("|z|^{power} at position {position}: the exponent of |z| must be even")]
    OddAbsolutePower { position: usize, power: u64 },
    #[error("exact computation requested but the symbol has a polar coefficient")]
    ExactnessViolation,
    #[error("section size must be at least 1")]
    SizeTooSmall,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("symbol does not have a fixed relative degree")]
    NotFixedDegree,
    #[error("relative degree {0} is negative")]
    NegativeDelta(i64),
    #[error("Mellin transform evaluated at a pole (s = {})", fmt_rational(.0))]
    PoleHit(Rational),
    #[error("denominator vanishes on the ray near {}", fmt_rational(.0))]
    DenominatorVanishes(Rational),
    #[error("rational function is unbounded on the ray")]
    Unbounded,
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("image of the disk has numerically zero area")]
    DegenerateImage,
}

pub type Result<T> = std::result::Result<T, Error>;
