//! 2x2 integer matrices with determinant +-1 and their Moebius action.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::quad::QuadElem;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2Z {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2Z {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        Mat2Z {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2Z::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn neg(&self) -> Self {
        Mat2Z {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: -self.d.clone(),
        }
    }

    /// Inverse of a determinant +1 matrix.
    pub fn inverse_unimodular(&self) -> Self {
        debug_assert!(self.det().is_one(), "inverse_unimodular requires det = 1");
        Mat2Z {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// Integer power; negative exponents require det = 1.
    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inverse_unimodular().pow(-e);
        }
        let mut acc = Mat2Z::identity();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn reduce_mod(&self, n: &BigInt) -> Self {
        Mat2Z {
            a: self.a.mod_floor(n),
            b: self.b.mod_floor(n),
            c: self.c.mod_floor(n),
            d: self.d.mod_floor(n),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Moebius action `(a alpha + b) / (c alpha + d)`.
    pub fn act(&self, alpha: &QuadElem) -> Result<QuadElem> {
        let num = alpha
            .scale(&Rational::from_integer(self.a.clone()))
            .checked_add(&QuadElem::from_rational(Rational::from_integer(
                self.b.clone(),
            )))?;
        let den = alpha
            .scale(&Rational::from_integer(self.c.clone()))
            .checked_add(&QuadElem::from_rational(Rational::from_integer(
                self.d.clone(),
            )))?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.checked_div(&den)
    }
}

impl Mul for &Mat2Z {
    type Output = Mat2Z;
    fn mul(self, rhs: &Mat2Z) -> Mat2Z {
        Mat2Z {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }
}

impl fmt::Display for Mat2Z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}
