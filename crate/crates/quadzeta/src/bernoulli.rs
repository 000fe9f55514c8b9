//! Bernoulli numbers, normalized Bernoulli polynomials, and Euler numbers.
//!
//! Conventions:
//! - `B_1 = -1/2`, i.e. the generating function is `u e^{ux}/(e^u - 1)` at `x = 0`;
//! - `b_l(x)` is the coefficient of `u^l` in `u e^{ux}/(e^u - 1)`, equal to the
//!   classical Bernoulli polynomial divided by `l!`;
//! - `E_n` are the coefficients of `sech(t) = sum E_n t^n / n!`.
//!
//! Numbers are computed by their defining recurrences and memoized behind a
//! mutex, so concurrent readers are safe.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;

fn bernoulli_cache() -> &'static Mutex<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

fn euler_cache() -> &'static Mutex<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigInt::one()]))
}

pub fn factorial(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=u64::from(n) {
        f *= i;
    }
    f
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - i;
    }
    num / factorial(k)
}

/// The n-th Bernoulli number, from `sum_{j=0}^{n} C(n+1,j) B_j = 0`.
pub fn bernoulli_number(n: u32) -> Rational {
    let mut table = bernoulli_cache().lock().unwrap();
    while table.len() <= n as usize {
        let m = table.len() as u32; // compute B_m
        let mut acc = Rational::zero();
        for j in 0..m {
            acc += Rational::from_integer(binomial(m + 1, j)) * &table[j as usize];
        }
        let b = -acc / Rational::from_integer(BigInt::from(m + 1));
        table.push(b);
    }
    table[n as usize].clone()
}

/// The n-th Euler number, from `cosh(t) * sech(t) = 1`.
pub fn euler_number(n: u32) -> BigInt {
    let mut table = euler_cache().lock().unwrap();
    while table.len() <= n as usize {
        let m = table.len() as u32; // compute E_m
        let mut acc = BigInt::zero();
        let mut j = 2;
        while j <= m {
            acc += binomial(m, j) * &table[(m - j) as usize];
            j += 2;
        }
        table.push(-acc);
    }
    table[n as usize].clone()
}

/// Coefficients of the normalized Bernoulli polynomial `b_l`, ascending in the
/// power of x: `b_l(x) = sum_m coeffs[m] * x^m` with
/// `coeffs[m] = B_{l-m} / ((l-m)! m!)`.
pub fn bernoulli_poly_coeffs(l: u32) -> Vec<Rational> {
    (0..=l)
        .map(|m| {
            bernoulli_number(l - m)
                / Rational::from_integer(factorial(l - m) * factorial(m))
        })
        .collect()
}

/// Normalized Bernoulli polynomial `b_l(x)`.
pub fn bernoulli_poly(l: u32, x: &Rational) -> Rational {
    // Horner on the ascending coefficient list.
    let coeffs = bernoulli_poly_coeffs(l);
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use num_traits::Signed;

    /// Independent oracle: coefficients of u/(e^u - 1) by power-series
    /// reciprocal of (e^u - 1)/u = sum u^m/(m+1)!, no Bernoulli numbers used.
    fn bernoulli_by_series_inversion(upto: usize) -> Vec<Rational> {
        let denom: Vec<Rational> = (0..=upto)
            .map(|m| Rational::new(BigInt::one(), factorial(m as u32 + 1)))
            .collect();
        // recip[n]: sum_{i=0}^{n} recip[i] * denom[n-i] = [n == 0]
        let mut recip = vec![Rational::zero(); upto + 1];
        recip[0] = Rational::one();
        for n in 1..=upto {
            let mut acc = Rational::zero();
            for i in 0..n {
                acc += &recip[i] * &denom[n - i];
            }
            recip[n] = -acc;
        }
        // B_n = n! * recip[n]
        recip
            .into_iter()
            .enumerate()
            .map(|(n, c)| c * Rational::from_integer(factorial(n as u32)))
            .collect()
    }

    /// Independent oracle: coefficients of sech by reciprocal of cosh.
    fn euler_by_series_inversion(upto: usize) -> Vec<BigInt> {
        let cosh: Vec<Rational> = (0..=upto)
            .map(|m| {
                if m % 2 == 0 {
                    Rational::new(BigInt::one(), factorial(m as u32))
                } else {
                    Rational::zero()
                }
            })
            .collect();
        let mut recip = vec![Rational::zero(); upto + 1];
        recip[0] = Rational::one();
        for n in 1..=upto {
            let mut acc = Rational::zero();
            for i in 0..n {
                acc += &recip[i] * &cosh[n - i];
            }
            recip[n] = -acc;
        }
        recip
            .into_iter()
            .enumerate()
            .map(|(n, c)| {
                let e = c * Rational::from_integer(factorial(n as u32));
                assert!(e.is_integer(), "Euler numbers must be integers");
                e.to_integer()
            })
            .collect()
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli_number(0), rat_int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_matches_series_inversion() {
        let oracle = bernoulli_by_series_inversion(16);
        for (n, expected) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli_number(n as u32), expected, "B_{n}");
        }
    }

    #[test]
    fn bernoulli_odd_vanish() {
        for n in (3..=25).step_by(2) {
            assert!(bernoulli_number(n).is_zero(), "B_{n} should be 0");
        }
    }

    #[test]
    fn euler_small_values() {
        assert_eq!(euler_number(0), BigInt::from(1));
        assert_eq!(euler_number(3), BigInt::from(0));
        assert_eq!(euler_number(6), BigInt::from(-61));
    }

    #[test]
    fn euler_matches_series_inversion() {
        let oracle = euler_by_series_inversion(14);
        for (n, expected) in oracle.iter().enumerate() {
            assert_eq!(&euler_number(n as u32), expected, "E_{n}");
        }
    }

    #[test]
    fn euler_odd_vanish() {
        for n in (1..=15).step_by(2) {
            assert!(euler_number(n).is_zero(), "E_{n} should be 0");
        }
    }

    #[test]
    fn poly_small_values() {
        assert_eq!(bernoulli_poly(0, &rat(7, 3)), rat_int(1));
        assert_eq!(bernoulli_poly(1, &rat(1, 4)), rat(-1, 4));
        assert_eq!(bernoulli_poly(2, &rat(1, 4)), rat(-1, 96));
    }

    #[test]
    fn poly_at_zero_is_bernoulli_over_factorial() {
        for l in 0..=12u32 {
            let expected = bernoulli_number(l) / Rational::from_integer(factorial(l));
            assert_eq!(bernoulli_poly(l, &rat_int(0)), expected);
        }
    }

    /// Independent oracle for b_l(x): multiply the series-inverted u/(e^u-1)
    /// by e^{ux} and take the u^l coefficient, at a specific rational x.
    fn poly_by_generating_series(l: usize, x: &Rational) -> Rational {
        let base = bernoulli_by_series_inversion(l);
        let mut acc = Rational::zero();
        let mut xpow = Rational::one();
        for j in 0..=l {
            // coefficient of u^j in e^{ux} is x^j/j!
            let term = &xpow * &base[l - j]
                / Rational::from_integer(factorial(l as u32 - j as u32) * factorial(j as u32));
            acc += term;
            xpow *= x;
        }
        acc
    }

    #[test]
    fn poly_matches_generating_series() {
        for l in 0..=9usize {
            for x in [rat(1, 4), rat(-2, 3), rat_int(2), rat(7, 5)] {
                assert_eq!(bernoulli_poly(l as u32, &x), poly_by_generating_series(l, &x));
            }
        }
    }

    #[test]
    fn poly_reflection_symmetry() {
        // b_l(1-x) = (-1)^l b_l(x)
        for l in 0..=10u32 {
            for (n, d) in [(1, 4), (-3, 7), (5, 2), (0, 1), (9, 11)] {
                let x = rat(n, d);
                let lhs = bernoulli_poly(l, &(rat_int(1) - &x));
                let rhs = if l % 2 == 0 {
                    bernoulli_poly(l, &x)
                } else {
                    -bernoulli_poly(l, &x)
                };
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn binomial_basics() {
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(10, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert!(binomial(40, 20).abs() > BigInt::from(1_000_000_000u64));
    }
}
