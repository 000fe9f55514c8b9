//! Error type shared across the crate.

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("a quadratic irrationality is required, got a rational value")]
    RationalAlpha,

    #[error("operands live in different quadratic fields (sqrt({0}) vs sqrt({1}))")]
    MixedFields(BigInt, BigInt),

    #[error("division by zero")]
    DivisionByZero,

    #[error("element does not multiply the lattice into itself (non-integral coordinates)")]
    NotInOrder,

    #[error("matrix is not congruent to the identity mod 2 up to sign")]
    NotInGamma2,

    #[error("the shift parameter p must not be an integer")]
    IntegralP,

    #[error("transfer matrix has c = {c}, exceeding the cap {cap}; use the fixed-point method")]
    ResourceCap { c: BigInt, cap: u64 },

    #[error("near-resonance at n = {n}: |{quantity}| is below the precision floor; retry with more bits")]
    Resonance { n: u64, quantity: &'static str },

    #[error("alpha must be a unit of its quadratic field, different from 1 and -1")]
    NotAUnit,

    #[error("the fundamental unit of this order is too large to compute (continued fraction period beyond the search bound)")]
    UnitTooLarge,

    #[error("argument must be nonzero")]
    ZeroArgument,

    #[error("precision too low: need at least {min} bits")]
    PrecisionTooLow { min: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
