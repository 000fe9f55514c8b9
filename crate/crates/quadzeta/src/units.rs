//! Orders of lattices Z + Z*alpha, fundamental units, and the ring
//! homomorphism j into 2x2 integer matrices.
//!
//! The fundamental unit of the order of discriminant `disc` is found from the
//! continued fraction expansion of the canonical generator, with period
//! detection on exact surd states. Each expansion step rescales the lattice,
//! which leaves its multiplier order unchanged, so the cycle product is a unit
//! of the original order.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat2::Mat2Z;
use crate::quad::QuadElem;
use crate::rational::Rational;

/// The order attached to the lattice Z + Z*alpha.
#[derive(Debug, Clone)]
pub struct OrderData {
    pub alpha: QuadElem,
    /// Discriminant b^2 - 4ac of the primitive minimal polynomial of alpha.
    pub disc: BigInt,
    /// Fundamental totally positive unit of the order, normalized > 1.
    pub gamma: QuadElem,
}

/// Primitive integer minimal polynomial `a x^2 + b x + c` of a quadratic
/// irrationality, with `gcd(a,b,c) = 1` and `a > 0`.
pub fn minimal_polynomial(alpha: &QuadElem) -> Result<(BigInt, BigInt, BigInt)> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    // alpha satisfies X^2 - trace*X + norm = 0
    let tr = alpha.trace();
    let nm = alpha.norm();
    let den = tr.denom().lcm(nm.denom());
    let a = den.clone();
    let b = (-tr * Rational::from_integer(den.clone())).to_integer();
    let c = (nm * Rational::from_integer(den)).to_integer();
    let g = a.gcd(&b).gcd(&c);
    Ok((a / &g, b / &g, c / &g))
}

/// Fundamental unit (norm +1 or -1, normalized > 1) of the real quadratic
/// order of discriminant `disc`.
pub fn fundamental_unit(disc: &BigInt) -> Result<QuadElem> {
    validate_discriminant(disc)?;
    // Canonical generator of the order: sqrt(disc/4) for even discriminants,
    // (1 + sqrt(disc))/2 for odd ones.
    let omega = if disc.mod_floor(&BigInt::from(4)).is_zero() {
        QuadElem::new(Rational::zero(), Rational::one(), disc / BigInt::from(4))?
    } else {
        QuadElem::new(
            Rational::new(BigInt::one(), BigInt::from(2)),
            Rational::new(BigInt::one(), BigInt::from(2)),
            disc.clone(),
        )?
    };
    fundamental_unit_from(omega)
}

/// Same, but with the squarefree kernel of the field already known, so the
/// generator is built without refactoring the discriminant: `disc = kernel
/// * f^2` with `f` an exact integer square root.
fn fundamental_unit_in(disc: &BigInt, kernel: &BigInt) -> Result<QuadElem> {
    validate_discriminant(disc)?;
    let ratio: BigInt = disc / kernel;
    let f = ratio.sqrt();
    assert_eq!(&f * &f * kernel, *disc, "discriminant must be kernel * f^2");
    let omega = if disc.mod_floor(&BigInt::from(4)).is_zero() {
        // f is even here: kernel is squarefree, so 4 | disc forces 4 | f^2
        QuadElem::new(
            Rational::zero(),
            Rational::from_integer(f / BigInt::from(2)),
            kernel.clone(),
        )?
    } else {
        QuadElem::new(
            Rational::new(BigInt::one(), BigInt::from(2)),
            Rational::new(f, BigInt::from(2)),
            kernel.clone(),
        )?
    };
    fundamental_unit_from(omega)
}

fn validate_discriminant(disc: &BigInt) -> Result<()> {
    if !disc.is_positive() {
        return Err(Error::Parse(format!("discriminant {disc} must be positive")));
    }
    let rem = disc.mod_floor(&BigInt::from(4));
    if !rem.is_zero() && !rem.is_one() {
        return Err(Error::Parse(format!(
            "{disc} is not a discriminant (must be 0 or 1 mod 4)"
        )));
    }
    let root = disc.sqrt();
    if &root * &root == *disc {
        return Err(Error::RationalAlpha);
    }
    Ok(())
}

fn fundamental_unit_from(omega: QuadElem) -> Result<QuadElem> {
    // Continued fraction with period detection on exact states.
    let mut seen: HashMap<QuadElem, usize> = HashMap::new();
    let mut theta = omega;
    let mut digits: Vec<BigInt> = Vec::new();
    let (cycle_start, cycle_theta) = loop {
        if let Some(&i) = seen.get(&theta) {
            break (i, theta);
        }
        seen.insert(theta.clone(), digits.len());
        let a = theta.floor();
        let next = theta
            .checked_sub(&QuadElem::from_rational(Rational::from_integer(a.clone())))?
            .inv()?;
        digits.push(a);
        theta = next;
        // Periods scale like the regulator: a unit needing this many
        // expansion steps has tens of thousands of digits and is out of
        // reach for every downstream computation anyway.
        if digits.len() >= 50_000 {
            return Err(Error::UnitTooLarge);
        }
    };

    // Product of the period matrices (a_t 1; 1 0) stabilizes the cycle state.
    let mut m = Mat2Z::identity();
    for a in &digits[cycle_start..] {
        m = &m * &Mat2Z::new(a.clone(), BigInt::one(), BigInt::one(), BigInt::zero());
    }
    let unit = cycle_theta
        .scale(&Rational::from_integer(m.c.clone()))
        .checked_add(&QuadElem::from_rational(Rational::from_integer(
            m.d.clone(),
        )))?;

    Ok(normalize_above_one(unit))
}

/// Replaces `u` by whichever of `u, -u, 1/u, -1/u` exceeds 1.
fn normalize_above_one(u: QuadElem) -> QuadElem {
    let one = QuadElem::from_int(1);
    let mut best = u.clone();
    if best.sign() < 0 {
        best = -best;
    }
    if best.checked_sub(&one).unwrap().sign() <= 0 {
        best = best.inv().expect("unit is nonzero");
        if best.sign() < 0 {
            best = -best;
        }
    }
    debug_assert!(best.checked_sub(&one).unwrap().sign() > 0);
    best
}

/// Order data for the lattice Z + Z*alpha: discriminant plus the fundamental
/// totally positive unit gamma > 1.
pub fn lattice_order(alpha: &QuadElem) -> Result<OrderData> {
    let (a, b, c) = minimal_polynomial(alpha)?;
    let disc = &b * &b - BigInt::from(4) * &a * &c;
    let eps = fundamental_unit_in(&disc, alpha.radicand())?;
    let gamma = if eps.norm() == Rational::one() {
        eps
    } else {
        eps.checked_mul(&eps.clone())?
    };
    debug_assert!(gamma.sign() > 0 && gamma.conj().sign() > 0);
    debug_assert!(gamma.norm().is_one());
    // gamma > 1 by construction (eps > 1)
    Ok(OrderData {
        alpha: alpha.clone(),
        disc,
        gamma,
    })
}

/// Matrix of multiplication by `u` in the basis `(alpha, 1)`:
/// `u*alpha = a*alpha + b`, `u*1 = c*alpha + d`. Errors unless both
/// coordinate pairs are integral, i.e. unless `u` multiplies the lattice
/// into itself.
pub fn j_matrix(u: &QuadElem, alpha: &QuadElem) -> Result<Mat2Z> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    let coords = |w: &QuadElem| -> Result<(BigInt, BigInt)> {
        // w = t*alpha + s
        let t = w.surd_coeff() / alpha.surd_coeff();
        let s = w.rational_part() - &t * alpha.rational_part();
        if !t.is_integer() || !s.is_integer() {
            return Err(Error::NotInOrder);
        }
        Ok((t.to_integer(), s.to_integer()))
    };
    let ua = u.checked_mul(alpha)?;
    let (a, b) = coords(&ua)?;
    let (c, d) = coords(u)?;
    Ok(Mat2Z { a, b, c, d })
}
