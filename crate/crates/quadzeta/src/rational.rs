//! Arbitrary-precision rationals and the two fractional-part conventions.
//!
//! `Rational` is the universal scalar of the crate. It is always canonical:
//! reduced to lowest terms with a positive denominator, so equality is
//! structural.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// Shorthand for small rational literals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Both fractional parts of a rational number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracParts {
    /// `{x}` with `0 <= {x} < 1` and `x - {x}` integral.
    pub brace: Rational,
    /// `<x>` with `0 < <x> <= 1` and `x - <x>` integral.
    pub angle: Rational,
}

/// Computes `{x}` and `<x>`. They agree except at integers, where
/// `{n} = 0` and `<n> = 1`.
pub fn frac_parts(x: &Rational) -> FracParts {
    let brace = x - x.floor();
    let angle = if brace.is_zero() {
        Rational::one()
    } else {
        brace.clone()
    };
    FracParts { brace, angle }
}

/// `{x}` alone.
pub fn frac_brace(x: &Rational) -> Rational {
    x - x.floor()
}

/// Least common multiple of the denominators of `xs`.
pub fn denominator_lcm(xs: &[&Rational]) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    l
}
