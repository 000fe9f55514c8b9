//! Result types for certified special values.

use std::fmt;

use crate::quad::QuadElem;
use crate::rational::Rational;

/// Which exact evaluation route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Closed-form finite double sum obtained through the transfer matrix.
    EtaSum,
    /// Functional-equation propagation along a subgroup word plus fixed-point
    /// solving.
    FixedPoint,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::EtaSum => write!(f, "eta"),
            Method::FixedPoint => write!(f, "fixed-point"),
        }
    }
}

/// An exact special value: the ratio of the zeta value by the relevant power
/// of pi, an element of the same field as alpha.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialValue {
    pub alpha: QuadElem,
    pub k: u32,
    pub value: QuadElem,
    pub method: Method,
}

/// Certified cotangent value at a unit: the closed formula pins the magnitude
/// while the sign is adjudicated by the numeric series (the stated functional
/// equation carries a sign ambiguity at odd exponents).
#[derive(Debug, Clone, PartialEq)]
pub struct CotangentValue {
    /// Signed value exactly as the closed formula yields it.
    pub formula_value: Rational,
    /// |formula_value|.
    pub magnitude: Rational,
    /// Sign confirmed by the series oracle (falls back to the formula sign
    /// when adjudication failed).
    pub sign: i32,
    /// Whether the series magnitude matched and pinned the sign.
    pub adjudicated: bool,
}

impl CotangentValue {
    /// The adjudicated signed rational value of xi(alpha, 2k+1) divided by
    /// (2 pi)^{2k+1} sqrt(D).
    pub fn signed_value(&self) -> Rational {
        if self.sign < 0 {
            -self.magnitude.clone()
        } else {
            self.magnitude.clone()
        }
    }
}
