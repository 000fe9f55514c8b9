//! Exact evaluation of the symmetrized eta-function special value
//! `H(alpha, 1-2k, p, q) / pi^{2k}` as a finite double sum, and the secant
//! specialization built on it.
//!
//! With transfer data `(V, beta, p', q', rho)` for `(alpha, p, q)`, the value
//! is
//!
//! ```text
//!   2^{2k} (-1)^k / (beta^{2k-1} - 1)
//!     * sum_{j=1..c} sum_{l=0..2k+1}
//!         b_l((j - {p})/c) * b_{2k+1-l}({(j d + rho)/c}) * (-beta)^{l-1}
//! ```
//!
//! entirely in exact arithmetic. The inner Bernoulli-polynomial factors are
//! rational, so the j-sum is accumulated per l over a fixed integer
//! denominator (the polynomial arguments live on a grid with denominator
//! dividing `den(p)*c` resp. `den(rho)*c`), and the field elements
//! `(-beta)^{l-1}` enter once at the end. The cost is Theta(c k) integer
//! operations; a configurable cap on c guards against huge transfer units,
//! pointing callers to the fixed-point route whose cost is independent of c.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::bernoulli::bernoulli_poly_coeffs;
use crate::error::{Error, Result};
use crate::quad::QuadElem;
use crate::rational::{frac_brace, Rational};
use crate::transfer::{find_transfer_matrix_with_multiplier, TransferData};
use crate::value::{Method, SpecialValue};

/// Evaluation limits.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    /// Upper bound on the transfer entry c (the outer summation length).
    pub c_cap: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { c_cap: 10_000_000 }
    }
}

/// Integer-scaled evaluator for all normalized Bernoulli polynomials
/// `b_0 .. b_L` on arguments `T / Q`: `b_l(T/Q) = eval(l, T) / denom[l]`.
struct ScaledPolys {
    /// coeffs[l][i] is the integer coefficient of T^i.
    coeffs: Vec<Vec<BigInt>>,
    /// denom[l] = D_l * Q^l where D_l clears the rational coefficients.
    denoms: Vec<BigInt>,
}

impl ScaledPolys {
    fn build(l_max: u32, q: &BigInt) -> Self {
        let mut coeffs = Vec::with_capacity(l_max as usize + 1);
        let mut denoms = Vec::with_capacity(l_max as usize + 1);
        for l in 0..=l_max {
            let rats = bernoulli_poly_coeffs(l);
            let mut d = BigInt::one();
            for c in &rats {
                d = d.lcm(c.denom());
            }
            // q^{l-i} ladder, descending power as i ascends
            let mut qpow = vec![BigInt::one(); l as usize + 1];
            for i in (0..l as usize).rev() {
                qpow[i] = &qpow[i + 1] * q;
            }
            let ints: Vec<BigInt> = rats
                .iter()
                .zip(qpow.iter())
                .map(|(c, qp)| {
                    let scaled = c * Rational::from_integer(&d * qp);
                    debug_assert!(scaled.is_integer());
                    scaled.to_integer()
                })
                .collect();
            denoms.push(&d * &qpow[0]); // D_l * Q^l
            coeffs.push(ints);
        }
        ScaledPolys { coeffs, denoms }
    }
}

/// Moments `M[r][s] = sum_{j=1..count} T1_j^r T2_j^s` over `r + s <= l_max`,
/// where T1 steps by `step1` and T2 steps by `step2` modulo `q2`.
///
/// When every moment provably fits in 127 bits the loop runs on u128
/// machine words; otherwise it falls back to big integers. Both paths are
/// exact.
#[allow(clippy::too_many_arguments)]
fn power_moments(
    l_max: usize,
    count: u64,
    t1_start: &BigInt,
    step1: &BigInt,
    t2_start: &BigInt,
    step2: &BigInt,
    q1: &BigInt,
    q2: &BigInt,
) -> Vec<Vec<BigInt>> {
    let max_q = q1.max(q2);
    let bound: BigInt = BigInt::from(count) * max_q.pow(l_max as u32) + 1u32;
    if bound.bits() <= 127 && q1.bits() <= 64 && q2.bits() <= 64 {
        return power_moments_u128(l_max, count, t1_start, step1, t2_start, step2, q2);
    }

    let mut acc = vec![vec![BigInt::zero(); l_max + 1]; l_max + 1];
    let mut t1 = t1_start.clone();
    let mut t2 = t2_start.clone();
    let mut pow1 = vec![BigInt::one(); l_max + 1];
    let mut pow2 = vec![BigInt::one(); l_max + 1];
    for _ in 0..count {
        for r in 1..=l_max {
            pow1[r] = &pow1[r - 1] * &t1;
            pow2[r] = &pow2[r - 1] * &t2;
        }
        for r in 0..=l_max {
            for s in 0..=l_max - r {
                acc[r][s] += &pow1[r] * &pow2[s];
            }
        }
        t1 += step1;
        t2 += step2;
        if &t2 >= q2 {
            t2 -= q2;
        }
    }
    acc
}

fn power_moments_u128(
    l_max: usize,
    count: u64,
    t1_start: &BigInt,
    step1: &BigInt,
    t2_start: &BigInt,
    step2: &BigInt,
    q2: &BigInt,
) -> Vec<Vec<BigInt>> {
    let small = |x: &BigInt| -> u128 { x.to_u128().expect("bound check guarantees u128 range") };
    let mut t1 = small(t1_start);
    let step1 = small(step1);
    let mut t2 = small(t2_start);
    let step2 = small(step2);
    let q2 = small(q2);

    let mut acc = vec![vec![0u128; l_max + 1]; l_max + 1];
    let mut pow1 = vec![1u128; l_max + 1];
    let mut pow2 = vec![1u128; l_max + 1];
    for _ in 0..count {
        for r in 1..=l_max {
            pow1[r] = pow1[r - 1] * t1;
            pow2[r] = pow2[r - 1] * t2;
        }
        for (r, row) in acc.iter_mut().enumerate() {
            for (s, cell) in row.iter_mut().take(l_max + 1 - r).enumerate() {
                *cell += pow1[r] * pow2[s];
            }
        }
        t1 += step1;
        t2 += step2;
        if t2 >= q2 {
            t2 -= q2;
        }
    }
    acc.into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect()
}

/// The double sum for a prepared transfer, as `H(alpha,1-2k,p,q)/pi^{2k}`.
/// The point alpha enters only through the transfer data.
pub fn h_special_value_with_transfer(
    k: u32,
    p: &Rational,
    transfer: &TransferData,
    cfg: &EvalConfig,
) -> Result<QuadElem> {
    assert!(k >= 1);
    let c_big = transfer.v.c.clone();
    let c = c_big
        .to_u64()
        .filter(|&c| c <= cfg.c_cap)
        .ok_or(Error::ResourceCap {
            c: c_big.clone(),
            cap: cfg.c_cap,
        })?;
    let big_l = 2 * k + 1;

    // First argument grid: (j - {p})/c = T1/Q1, T1 stepping by den(p).
    let p_brace = frac_brace(p);
    let pd = p_brace.denom().clone();
    let pn = p_brace.numer().clone();
    let q1 = &pd * &c_big;
    let polys1 = ScaledPolys::build(big_l, &q1);

    // Second argument grid: {(j d + rho)/c} = T2/Q2, T2 stepping by
    // d*den(rho) mod Q2.
    let rd = transfer.rho.denom().clone();
    let rn = transfer.rho.numer().clone();
    let q2 = &rd * &c_big;
    let polys2 = ScaledPolys::build(big_l, &q2);
    let step2 = (&transfer.v.d * &rd).mod_floor(&q2);
    let t2 = (&transfer.v.d * &rd + &rn).mod_floor(&q2);

    // The summand factors as a product of two polynomials in T1 and T2, so
    // the j-sum reduces to the moments M[r][s] = sum_j T1^r T2^s over
    // r + s <= L: each S_l is then a short bilinear combination of the
    // moments with the scaled polynomial coefficients.
    let t1_start = &pd - &pn; // j = 1
    let moments = power_moments(
        big_l as usize,
        c,
        &t1_start,
        &pd,
        &t2,
        &step2,
        &q1,
        &q2,
    );

    // Combine: sum_l S_l * (-beta)^{l-1}
    let minus_beta = -transfer.beta.clone();
    let mut beta_pow = minus_beta.inv()?; // (-beta)^{-1} at l = 0
    let mut total = QuadElem::from_int(0);
    for l in 0..=big_l as usize {
        let lc = big_l as usize - l;
        let mut numer = BigInt::zero();
        for (r, g1) in polys1.coeffs[l].iter().enumerate() {
            for (s, g2) in polys2.coeffs[lc].iter().enumerate() {
                numer += g1 * g2 * &moments[r][s];
            }
        }
        let s_l = Rational::new(numer, &polys1.denoms[l] * &polys2.denoms[lc]);
        total = total.checked_add(&beta_pow.scale(&s_l))?;
        beta_pow = beta_pow.checked_mul(&minus_beta)?;
    }

    // Prefactor 2^{2k} (-1)^k / (beta^{2k-1} - 1)
    let mut two_pow = Rational::from_integer(BigInt::one() << (2 * k));
    if k % 2 == 1 {
        two_pow = -two_pow;
    }
    let denom = transfer
        .beta
        .pow(i64::from(2 * k - 1))?
        .checked_sub(&QuadElem::from_int(1))?;
    debug_assert!(!denom.is_zero(), "beta != 1 makes the denominator nonzero");
    total.scale(&two_pow).checked_div(&denom)
}

/// `H(alpha, 1-2k, p, q) / pi^{2k}` for a quadratic irrationality `alpha` and
/// a non-integral rational shift `p`.
pub fn h_special_value(
    alpha: &QuadElem,
    k: u32,
    p: &Rational,
    q: &Rational,
    cfg: &EvalConfig,
) -> Result<QuadElem> {
    let transfer = find_transfer_matrix_with_multiplier(alpha, p, q, 1)?;
    h_special_value_with_transfer(k, p, &transfer, cfg)
}

/// `psi(alpha0, 2k) / pi^{2k}` through the eta-function route: doubles the
/// argument and evaluates `2 H(2 alpha0, 1-2k, 1/4, 0)`.
pub fn secant_value_eta(alpha0: &QuadElem, k: u32, cfg: &EvalConfig) -> Result<SpecialValue> {
    if alpha0.is_rational() {
        return Err(Error::RationalAlpha);
    }
    assert!(k >= 1);
    let doubled = alpha0.scale(&Rational::from_integer(BigInt::from(2)));
    let quarter = Rational::new(BigInt::one(), BigInt::from(4));
    let h = h_special_value(&doubled, k, &quarter, &Rational::zero(), cfg)?;
    let value = h.scale(&Rational::from_integer(BigInt::from(2)));
    Ok(SpecialValue {
        alpha: alpha0.clone(),
        k,
        value,
        method: Method::EtaSum,
    })
}
