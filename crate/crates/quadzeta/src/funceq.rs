//! Affine functional-equation propagation along subgroup words, fixed-point
//! extraction of secant values, and the cotangent rationality formula at
//! units.
//!
//! For the free generators `A = (1 2; 0 1)` and `B = (1 0; 2 1)` the secant
//! ratio `psi(., 2k)` satisfies exact affine relations over Q(alpha): the A
//! relation is trivial and the B relation scales by `(2 alpha + 1)^{1-2k}`
//! minus a Bernoulli-Euler correction. Folding these along a word that fixes
//! alpha pins `psi(alpha, 2k)/pi^{2k}` as the fixed point of an affine map.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bernoulli::{bernoulli_number, binomial, euler_number, factorial};
use crate::error::{Error, Result};
use crate::gamma2::{gamma2_fixing_matrix, gamma2_word, Gamma2Word, Letter};
use crate::quad::QuadElem;
use crate::rational::Rational;
use crate::series::xi_series;
use crate::value::{CotangentValue, Method, SpecialValue};

/// An exact affine relation `psi(M alpha, 2k) = u psi(alpha, 2k) + v pi^{2k}`
/// between secant values at two points of one orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineRel {
    pub u: QuadElem,
    pub v: QuadElem,
    pub k: u32,
    pub base_alpha: QuadElem,
}

/// The Bernoulli-Euler correction entering the B relation:
/// `F(alpha,k) = ((-1)^{k+1}/(2k)!) sum_{m=0}^{2k} (2^{m-1}-1) B_m E_{2k-m}
///               C(2k,m) (alpha+1)^{2k-m} ((2alpha+1)^{m-2k} - (2alpha+1)^{1-2k})`.
/// Only even m contribute: odd m >= 3 kill `B_m`, and m = 1 carries the
/// factor `2^0 - 1 = 0`.
///
/// The k-parity prefactor is pinned by the series oracle and by exact
/// agreement with the independent double-sum route on the whole test grid;
/// without it the even-k values come out with the wrong sign.
fn bernoulli_euler_correction(alpha: &QuadElem, k: u32) -> Result<QuadElem> {
    let two_k = 2 * k;
    let alpha_plus_1 = alpha.checked_add(&QuadElem::from_int(1))?;
    let two_alpha_1 = alpha
        .scale(&Rational::from_integer(BigInt::from(2)))
        .checked_add(&QuadElem::from_int(1))?;
    let low_pow = two_alpha_1.pow(1 - i64::from(two_k))?;

    let mut acc = QuadElem::from_int(0);
    for m in 0..=two_k {
        // (2^{m-1} - 1): equals -1/2 at m = 0
        let two_part = if m == 0 {
            Rational::new(BigInt::from(-1), BigInt::from(2))
        } else {
            Rational::from_integer((BigInt::one() << (m - 1)) - 1)
        };
        let coef = two_part
            * bernoulli_number(m)
            * Rational::from_integer(euler_number(two_k - m) * binomial(two_k, m));
        if coef.is_zero() {
            continue;
        }
        let pow_diff = two_alpha_1
            .pow(i64::from(m) - i64::from(two_k))?
            .checked_sub(&low_pow)?;
        let term = alpha_plus_1
            .pow(i64::from(two_k - m))?
            .checked_mul(&pow_diff)?
            .scale(&coef);
        acc = acc.checked_add(&term)?;
    }
    let mut prefactor = Rational::new(BigInt::one(), factorial(two_k));
    if k.is_multiple_of(2) {
        prefactor = -prefactor;
    }
    Ok(acc.scale(&prefactor))
}

/// The affine relation of a single generator letter at the point `alpha`.
pub fn base_affine(letter: Letter, alpha: &QuadElem, k: u32) -> Result<AffineRel> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    assert!(k >= 1);
    let (u, v) = match letter {
        Letter::A | Letter::AInv => (QuadElem::from_int(1), QuadElem::from_int(0)),
        Letter::B => {
            let two_alpha_1 = alpha
                .scale(&Rational::from_integer(BigInt::from(2)))
                .checked_add(&QuadElem::from_int(1))?;
            let u = two_alpha_1.pow(1 - 2 * i64::from(k))?;
            let v = -bernoulli_euler_correction(alpha, k)?;
            (u, v)
        }
        Letter::BInv => {
            // solve the B relation at alpha' = B^{-1} alpha
            let alpha_prime = Letter::BInv.matrix().act(alpha)?;
            let two_ap_1 = alpha_prime
                .scale(&Rational::from_integer(BigInt::from(2)))
                .checked_add(&QuadElem::from_int(1))?;
            let u = two_ap_1.pow(2 * i64::from(k) - 1)?;
            let v = u.checked_mul(&bernoulli_euler_correction(&alpha_prime, k)?)?;
            (u, v)
        }
    };
    Ok(AffineRel {
        u,
        v,
        k,
        base_alpha: alpha.clone(),
    })
}

/// Folds a word right to left into the relation between `psi(W alpha, 2k)`
/// and `psi(alpha, 2k)`. The overall sign of the word is irrelevant since
/// plus and minus a matrix act alike.
pub fn word_affine(word: &Gamma2Word, alpha: &QuadElem, k: u32) -> Result<AffineRel> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha);
    }
    let mut point = alpha.clone();
    let mut u = QuadElem::from_int(1);
    let mut v = QuadElem::from_int(0);
    for letter in word.letters.iter().rev() {
        let rel = base_affine(*letter, &point, k)?;
        u = rel.u.checked_mul(&u)?;
        v = rel.u.checked_mul(&v)?.checked_add(&rel.v)?;
        point = letter.matrix().act(&point)?;
    }
    Ok(AffineRel {
        u,
        v,
        k,
        base_alpha: alpha.clone(),
    })
}

/// `psi(alpha0, 2k)/pi^{2k}` through the fixed-point route: decompose a
/// nontrivial subgroup element fixing alpha0 into generator letters, fold the
/// affine relations along the word, and solve
/// `psi = U psi + V pi^{2k}` for `psi`. The denominator `1 - U` never
/// vanishes: `U = (c' alpha + d')^{1-2k}` with `c' alpha + d'` equal to plus
/// or minus a totally positive unit above 1.
pub fn secant_value_fixed_point(alpha0: &QuadElem, k: u32) -> Result<SpecialValue> {
    if alpha0.is_rational() {
        return Err(Error::RationalAlpha);
    }
    assert!(k >= 1);
    let (fixing, _power) = gamma2_fixing_matrix(alpha0)?;
    let word = gamma2_word(&fixing)?;
    let rel = word_affine(&word, alpha0, k)?;
    let denom = QuadElem::from_int(1).checked_sub(&rel.u)?;
    assert!(
        !denom.is_zero(),
        "fixed-point denominator vanished; the cocycle unit cannot be 1"
    );
    let value = rel.v.checked_div(&denom)?;
    Ok(SpecialValue {
        alpha: alpha0.clone(),
        k,
        value,
        method: Method::FixedPoint,
    })
}

/// `phi(alpha, n) = sum_{j=0}^{n+1} B_j B_{n+1-j} / (j! (n+1-j)!) alpha^{j-1}`,
/// including the `1/alpha` term at j = 0.
pub fn phi(alpha: &QuadElem, n: u32) -> Result<QuadElem> {
    if alpha.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let mut acc = QuadElem::from_int(0);
    let mut alpha_pow = alpha.inv()?; // alpha^{j-1} starting at j = 0
    for j in 0..=n + 1 {
        let coef = bernoulli_number(j) * bernoulli_number(n + 1 - j)
            / Rational::from_integer(factorial(j) * factorial(n + 1 - j));
        if !coef.is_zero() {
            acc = acc.checked_add(&alpha_pow.scale(&coef))?;
        }
        if j <= n {
            alpha_pow = alpha_pow.checked_mul(alpha)?;
        }
    }
    Ok(acc)
}

/// The certified cotangent value at a unit alpha of its quadratic field:
/// magnitude from the closed formula
/// `phi(alpha, 2k+1) / (sqrt(D) (1 - eps alpha^{2k}))` with `eps = norm(alpha)`,
/// sign adjudicated by the series oracle at the given depth and precision.
pub fn cotangent_unit_value(
    alpha: &QuadElem,
    k: u32,
    n_terms: u64,
    prec_bits: u32,
) -> Result<CotangentValue> {
    let formula_value = cotangent_formula_value(alpha, k)?;
    let magnitude = formula_value.abs();

    // Oracle: xi(alpha, 2k+1) should be +- (2 pi)^{2k+1} sqrt(D) * magnitude.
    let series = xi_series(alpha, k, n_terms, prec_bits)?;
    let numeric = series.value.to_f64();
    let scale = series.value.scale;
    let two_pi_pow = crate::fixed::pi_pow(2 * k + 1, scale)
        .mul(&crate::fixed::Fixed::from_bigint(
            &(BigInt::one() << (2 * k + 1)),
            scale,
        ));
    let sqrt_d = crate::fixed::sqrt_bigint(alpha.radicand(), scale);
    let expected = two_pi_pow
        .mul(&sqrt_d)
        .mul_rational(&magnitude)
        .to_f64();

    let (sign, adjudicated) = if expected == 0.0 {
        (0, numeric.abs() < 1e-6)
    } else if (numeric.abs() - expected).abs() <= 0.05 * expected {
        (if numeric < 0.0 { -1 } else { 1 }, true)
    } else {
        (if formula_value.is_negative() { -1 } else { 1 }, false)
    };

    Ok(CotangentValue {
        formula_value,
        magnitude,
        sign,
        adjudicated,
    })
}

/// The closed-formula value alone (signed exactly as the formula yields it).
pub fn cotangent_formula_value(alpha: &QuadElem, k: u32) -> Result<Rational> {
    assert!(k >= 1);
    if alpha.is_rational() {
        // the only rational units are +-1, which are excluded anyway
        return Err(Error::NotAUnit);
    }
    let trace = alpha.trace();
    let norm = alpha.norm();
    let eps: i32 = if norm == Rational::one() {
        1
    } else if norm == -Rational::one() {
        -1
    } else {
        return Err(Error::NotAUnit);
    };
    if !trace.is_integer() {
        return Err(Error::NotAUnit);
    }
    // the inversion identity 1/alpha = -eps (alpha - trace) is forced by the
    // norm and trace; keep it checked
    debug_assert_eq!(
        alpha.inv()?,
        (alpha.checked_sub(&QuadElem::from_rational(trace.clone()))?)
            .scale(&Rational::from_integer(BigInt::from(-eps)))
    );

    let phi_val = phi(alpha, 2 * k + 1)?;
    let eps_pow = alpha
        .pow(i64::from(2 * k))?
        .scale(&Rational::from_integer(BigInt::from(eps)));
    let denom_unit = QuadElem::from_int(1).checked_sub(&eps_pow)?;
    let sqrt_d = QuadElem::new(Rational::zero(), Rational::one(), alpha.radicand().clone())?;
    let value = phi_val.checked_div(&sqrt_d.checked_mul(&denom_unit)?)?;
    assert!(
        value.is_rational(),
        "cotangent formula value must be rational, got {value}"
    );
    Ok(value.as_rational().unwrap().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::parse_quad;
    use crate::rational::rat;

    fn quad(s: &str) -> QuadElem {
        parse_quad(s).unwrap()
    }

    #[test]
    fn a_relation_is_trivial() {
        for s in ["sqrt(2)", "(1+sqrt(5))/2", "1+sqrt(3)"] {
            for k in [1, 2, 3] {
                let rel = base_affine(Letter::A, &quad(s), k).unwrap();
                assert!(rel.u.is_one());
                assert!(rel.v.is_zero());
            }
        }
    }

    #[test]
    fn letters_compose_with_their_inverses() {
        // rel(L^{-1} at L alpha) o rel(L at alpha) must be the identity
        for s in ["sqrt(2)", "sqrt(7)", "(1+sqrt(5))/2", "2+sqrt(3)"] {
            let alpha = quad(s);
            for k in [1u32, 2] {
                for letter in [Letter::A, Letter::AInv, Letter::B, Letter::BInv] {
                    let moved = letter.matrix().act(&alpha).unwrap();
                    let fwd = base_affine(letter, &alpha, k).unwrap();
                    let back = base_affine(letter.inverse(), &moved, k).unwrap();
                    let u = back.u.checked_mul(&fwd.u).unwrap();
                    let v = back.u.checked_mul(&fwd.v).unwrap().checked_add(&back.v).unwrap();
                    assert!(u.is_one(), "{s} k={k} {letter:?}: u = {u}");
                    assert!(v.is_zero(), "{s} k={k} {letter:?}: v = {v}");
                }
            }
        }
    }

    #[test]
    fn correction_sum_restricted_to_even_terms_matches() {
        // independent check that odd m contribute nothing
        let alpha = quad("sqrt(2)-2");
        let k = 2u32;
        let full = bernoulli_euler_correction(&alpha, k).unwrap();
        let mut even_only = QuadElem::from_int(0);
        let two_alpha_1 = alpha
            .scale(&Rational::from_integer(BigInt::from(2)))
            .checked_add(&QuadElem::from_int(1))
            .unwrap();
        let low = two_alpha_1.pow(1 - 2 * i64::from(k)).unwrap();
        let a1 = alpha.checked_add(&QuadElem::from_int(1)).unwrap();
        for m in (0..=2 * k).step_by(2) {
            let two_part = if m == 0 {
                rat(-1, 2)
            } else {
                Rational::from_integer((BigInt::one() << (m - 1)) - 1)
            };
            let coef = two_part
                * bernoulli_number(m)
                * Rational::from_integer(euler_number(2 * k - m) * binomial(2 * k, m));
            let diff = two_alpha_1
                .pow(i64::from(m) - 2 * i64::from(k))
                .unwrap()
                .checked_sub(&low)
                .unwrap();
            let term = a1
                .pow(i64::from(2 * k - m))
                .unwrap()
                .checked_mul(&diff)
                .unwrap()
                .scale(&coef);
            even_only = even_only.checked_add(&term).unwrap();
        }
        let mut prefactor = Rational::new(BigInt::one(), factorial(2 * k));
        if k.is_multiple_of(2) {
            prefactor = -prefactor;
        }
        even_only = even_only.scale(&prefactor);
        assert_eq!(full, even_only);
    }

    #[test]
    fn empty_and_single_a_words_are_identity() {
        let alpha = quad("sqrt(2)");
        let w = Gamma2Word { letters: vec![], sign: 1 };
        let rel = word_affine(&w, &alpha, 1).unwrap();
        assert!(rel.u.is_one() && rel.v.is_zero());
        let w = Gamma2Word { letters: vec![Letter::A], sign: 1 };
        let rel = word_affine(&w, &alpha, 1).unwrap();
        assert!(rel.u.is_one() && rel.v.is_zero());
    }

    #[test]
    fn cocycle_u_matches_denominator_power() {
        // u = (c' alpha + d')^{1-2k} for the product matrix of the word
        let mut state = 0xD1B54A32D192ED03u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let alphas = [quad("sqrt(2)"), quad("(1+sqrt(5))/2"), quad("1+sqrt(3)")];
        for trial in 0..40 {
            let len = (rng() % 9) as usize;
            let letters: Vec<Letter> = (0..len)
                .map(|_| match rng() % 4 {
                    0 => Letter::A,
                    1 => Letter::AInv,
                    2 => Letter::B,
                    _ => Letter::BInv,
                })
                .collect();
            let word = Gamma2Word { letters, sign: 1 };
            let m = word.product();
            let alpha = &alphas[trial % alphas.len()];
            for k in [1u32, 2] {
                let rel = word_affine(&word, alpha, k).unwrap();
                let denom = alpha
                    .scale(&Rational::from_integer(m.c.clone()))
                    .checked_add(&QuadElem::from_rational(Rational::from_integer(
                        m.d.clone(),
                    )))
                    .unwrap();
                let expected = denom.pow(1 - 2 * i64::from(k)).unwrap();
                assert_eq!(rel.u, expected, "word {:?} at {alpha} k={k}", word.letters);
            }
        }
    }

    #[test]
    fn headline_fixed_point_value() {
        let v = secant_value_fixed_point(&quad("sqrt(2)"), 1).unwrap();
        assert_eq!(v.value, QuadElem::from_rational(rat(-1, 3)));
        assert_eq!(v.method, Method::FixedPoint);
    }

    #[test]
    fn sqrt3_value_is_rational() {
        let v = secant_value_fixed_point(&quad("sqrt(3)"), 1).unwrap();
        assert!(v.value.is_rational(), "got {}", v.value);
    }

    #[test]
    fn conjugate_points_give_conjugate_values() {
        for k in [1u32, 2] {
            let a = secant_value_fixed_point(&quad("1+sqrt(3)"), k).unwrap();
            let b = secant_value_fixed_point(&quad("1-sqrt(3)"), k).unwrap();
            assert_eq!(a.value.conj(), b.value, "k={k}");
        }
    }

    #[test]
    fn phi_small_cases() {
        // phi(alpha, 1) = alpha/12 + 1/4 + 1/(12 alpha)
        let alpha = quad("sqrt(2)");
        let direct = alpha.scale(&rat(1, 12))
            + QuadElem::from_rational(rat(1, 4))
            + alpha.inv().unwrap().scale(&rat(1, 12));
        assert_eq!(phi(&alpha, 1).unwrap(), direct);

        // phi(alpha, 3) = -1/(720 alpha) + alpha/144 - alpha^3/720
        let direct3 = alpha.inv().unwrap().scale(&rat(-1, 720))
            + alpha.scale(&rat(1, 144))
            + alpha.pow(3).unwrap().scale(&rat(-1, 720));
        assert_eq!(phi(&alpha, 3).unwrap(), direct3);

        // golden ratio collapse
        let golden = quad("(1+sqrt(5))/2");
        assert_eq!(phi(&golden, 3).unwrap(), golden.scale(&rat(1, 360)));

        assert!(matches!(
            phi(&QuadElem::from_int(0), 3),
            Err(Error::ZeroArgument)
        ));
    }

    #[test]
    fn phi_inversion_scaling() {
        // phi(1/alpha, n) = alpha^{1-n} phi(alpha, n): the coefficient list
        // is palindromic, so inverting the argument reverses the powers
        for s in ["sqrt(2)", "(1+sqrt(5))/2", "3-2*sqrt(2)"] {
            let alpha = quad(s);
            for n in [1u32, 3, 5] {
                let lhs = phi(&alpha.inv().unwrap(), n).unwrap();
                let rhs = alpha
                    .pow(1 - i64::from(n))
                    .unwrap()
                    .checked_mul(&phi(&alpha, n).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs, "{s} n={n}");
            }
        }
    }

    #[test]
    fn cotangent_formula_magnitudes() {
        let v = cotangent_formula_value(&quad("(1+sqrt(5))/2"), 1).unwrap();
        assert_eq!(v.abs(), rat(1, 1800));
        let v = cotangent_formula_value(&quad("3+2*sqrt(2)"), 1).unwrap();
        assert_eq!(v.abs(), rat(29, 5760));
    }

    #[test]
    fn cotangent_rejects_non_units() {
        assert!(matches!(
            cotangent_formula_value(&QuadElem::from_int(1), 1),
            Err(Error::NotAUnit)
        ));
        assert!(matches!(
            cotangent_formula_value(&quad("sqrt(2)"), 1),
            Err(Error::NotAUnit)
        ));
        assert!(matches!(
            cotangent_formula_value(&quad("(1+sqrt(5))/3"), 1),
            Err(Error::NotAUnit)
        ));
    }

    #[test]
    fn cotangent_adjudication_golden_ratio() {
        let v = cotangent_unit_value(&quad("(1+sqrt(5))/2"), 1, 20_000, 96).unwrap();
        assert_eq!(v.magnitude, rat(1, 1800));
        assert!(v.adjudicated);
        assert_eq!(v.sign, -1);
        assert_eq!(v.signed_value(), rat(-1, 1800));
        // the formula itself carries the opposite sign here; both are reported
        assert_eq!(v.formula_value, rat(1, 1800));
    }

    #[test]
    fn cotangent_formula_sign_is_confirmed_at_even_weight() {
        // at k=2 the series magnitude reconstructs 1/60480 and the formula
        // sign agrees with the oracle, unlike at k=1
        let v = cotangent_unit_value(&quad("(1+sqrt(5))/2"), 2, 20_000, 96).unwrap();
        assert_eq!(v.magnitude, rat(1, 60480));
        assert!(v.adjudicated);
        assert_eq!(v.sign, -1);
        assert_eq!(v.formula_value, rat(-1, 60480));
    }

    #[test]
    fn fixed_point_values_match_numeric_oracle_loosely() {
        // psi(sqrt(3), 4)/pi^4 from the exact route vs direct summation
        let v = secant_value_fixed_point(&quad("sqrt(3)"), 2).unwrap();
        let series = crate::series::psi_series(&quad("sqrt(3)"), 2, 20_000, 96)
            .unwrap()
            .value
            .to_f64();
        let pi4 = std::f64::consts::PI.powi(4);
        let exact = v.value.approx_f64() * pi4;
        assert!(
            (exact - series).abs() < 1e-4,
            "exact {exact} vs series {series}"
        );
    }

    #[test]
    fn rational_alpha_rejected() {
        assert!(matches!(
            secant_value_fixed_point(&quad("2"), 1),
            Err(Error::RationalAlpha)
        ));
        assert!(matches!(
            base_affine(Letter::B, &quad("1/2"), 1),
            Err(Error::RationalAlpha)
        ));
    }
}
