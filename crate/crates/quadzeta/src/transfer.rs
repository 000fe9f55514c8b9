//! Construction of the transfer matrix V: an SL2(Z) matrix with positive
//! lower-left entry that scales the column (alpha, 1) by a totally positive
//! unit beta and preserves the row vector (p, q) modulo Z^2.
//!
//! The search takes the j-matrix J of the fundamental totally positive unit
//! and finds the least power congruent to the identity modulo the common
//! denominator N of p and q (stronger than the row condition, and always
//! reachable since J is invertible mod N). If that power has a negative c
//! entry, its inverse is used instead, which flips the sign of c and keeps
//! the congruence.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat2::Mat2Z;
use crate::quad::QuadElem;
use crate::rational::{denominator_lcm, frac_brace, is_integer, Rational};
use crate::units::{j_matrix, lattice_order};

/// The data realizing the transfer: matrix, unit, unit power, transported
/// shifts, and the combination rho entering the closed-form double sum.
#[derive(Debug, Clone)]
pub struct TransferData {
    pub v: Mat2Z,
    /// beta = V.c * alpha + V.d, a totally positive unit != 1.
    pub beta: QuadElem,
    /// The power of the fundamental totally positive unit used: beta = gamma^(+-m).
    pub m: u64,
    pub pprime: Rational,
    pub qprime: Rational,
    /// rho = {q'} c - {p'} d.
    pub rho: Rational,
}

/// Finds the transfer data for `(alpha, p, q)` using the least valid unit
/// power.
pub fn find_transfer_matrix(alpha: &QuadElem, p: &Rational, q: &Rational) -> Result<TransferData> {
    find_transfer_matrix_with_multiplier(alpha, p, q, 1)
}

/// Same as [`find_transfer_matrix`] but uses `multiplier` times the least
/// valid power. Values computed from different multipliers must agree; the
/// test suite exercises this.
pub fn find_transfer_matrix_with_multiplier(
    alpha: &QuadElem,
    p: &Rational,
    q: &Rational,
    multiplier: u64,
) -> Result<TransferData> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    if is_integer(p) {
        return Err(Error::IntegralP);
    }
    assert!(multiplier >= 1);

    let order = lattice_order(alpha)?;
    let j = j_matrix(&order.gamma, alpha)?;
    let n = denominator_lcm(&[p, q]);

    // Least m >= 1 with J^m = I mod N. The group of invertible matrices mod N
    // is finite, so this terminates; N^3 bounds the order of SL2(Z/N).
    let jn = j.reduce_mod(&n);
    let mut power_mod = jn.clone();
    let mut m = 1u64;
    let bound = &n * &n * &n;
    let mut count = BigInt::one();
    while !power_mod.is_identity() {
        power_mod = (&power_mod * &jn).reduce_mod(&n);
        m += 1;
        count += 1;
        assert!(count <= bound, "unit image mod N failed to reach identity");
    }

    let total = m
        .checked_mul(multiplier)
        .expect("transfer power overflows u64");
    let v_raw = j.pow(total as i64);
    assert!(
        !v_raw.c.is_zero(),
        "a power of a totally positive unit of infinite order cannot be rational"
    );
    let v = if v_raw.c.is_positive() {
        v_raw
    } else {
        v_raw.inverse_unimodular()
    };

    let beta = alpha
        .scale(&Rational::from_integer(v.c.clone()))
        .checked_add(&QuadElem::from_rational(Rational::from_integer(
            v.d.clone(),
        )))?;
    debug_assert!(beta.sign() > 0 && beta.conj().sign() > 0);
    debug_assert!(!beta.is_one());

    let pprime = p * Rational::from_integer(v.a.clone()) + q * Rational::from_integer(v.c.clone());
    let qprime = p * Rational::from_integer(v.b.clone()) + q * Rational::from_integer(v.d.clone());
    debug_assert!(is_integer(&(&pprime - p)));
    debug_assert!(is_integer(&(&qprime - q)));

    let rho = frac_brace(&qprime) * Rational::from_integer(v.c.clone())
        - frac_brace(&pprime) * Rational::from_integer(v.d.clone());

    Ok(TransferData {
        v,
        beta,
        m: total,
        pprime,
        qprime,
        rho,
    })
}
