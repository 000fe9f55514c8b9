//! Deterministic fixed-point real arithmetic on arbitrary-precision
//! mantissas.
//!
//! A value is `mantissa / 2^scale`. Addition and subtraction are exact;
//! multiplication and division truncate toward zero, so each costs at most
//! one unit in the last place and error is sign-symmetric. Everything is a
//! pure function of its inputs: identical inputs give bit-identical outputs
//! on any thread count.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::quad::QuadElem;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    pub mantissa: BigInt,
    pub scale: u32,
}

/// Shift right truncating toward zero (plain `>>` on `BigInt` floors).
fn shr_trunc(x: &BigInt, s: u32) -> BigInt {
    if x.is_negative() {
        -((-x) >> s)
    } else {
        x >> s
    }
}

impl Fixed {
    pub fn zero(scale: u32) -> Self {
        Fixed {
            mantissa: BigInt::zero(),
            scale,
        }
    }

    pub fn one(scale: u32) -> Self {
        Fixed {
            mantissa: BigInt::one() << scale,
            scale,
        }
    }

    pub fn from_bigint(n: &BigInt, scale: u32) -> Self {
        Fixed {
            mantissa: n << scale,
            scale,
        }
    }

    pub fn from_rational(r: &Rational, scale: u32) -> Self {
        Fixed {
            mantissa: (r.numer() << scale) / r.denom(),
            scale,
        }
    }

    fn assert_same_scale(&self, other: &Self) {
        assert_eq!(self.scale, other.scale, "mixed fixed-point scales");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        Fixed {
            mantissa: &self.mantissa + &other.mantissa,
            scale: self.scale,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        Fixed {
            mantissa: &self.mantissa - &other.mantissa,
            scale: self.scale,
        }
    }

    pub fn neg(&self) -> Self {
        Fixed {
            mantissa: -self.mantissa.clone(),
            scale: self.scale,
        }
    }

    pub fn abs(&self) -> Self {
        Fixed {
            mantissa: self.mantissa.abs(),
            scale: self.scale,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        Fixed {
            mantissa: shr_trunc(&(&self.mantissa * &other.mantissa), self.scale),
            scale: self.scale,
        }
    }

    /// Division truncating toward zero; caller must ensure `other != 0`.
    pub fn div(&self, other: &Self) -> Self {
        self.assert_same_scale(other);
        assert!(!other.mantissa.is_zero(), "fixed-point division by zero");
        Fixed {
            mantissa: (&self.mantissa << self.scale) / &other.mantissa,
            scale: self.scale,
        }
    }

    pub fn recip(&self) -> Self {
        Fixed::one(self.scale).div(self)
    }

    /// Multiply by an exact rational.
    pub fn mul_rational(&self, r: &Rational) -> Self {
        Fixed {
            mantissa: (&self.mantissa * r.numer()) / r.denom(),
            scale: self.scale,
        }
    }

    pub fn div_bigint(&self, n: &BigInt) -> Self {
        assert!(!n.is_zero());
        Fixed {
            mantissa: &self.mantissa / n,
            scale: self.scale,
        }
    }

    /// Change scale; lowering the scale truncates toward zero.
    pub fn rescale(&self, scale: u32) -> Self {
        if scale >= self.scale {
            Fixed {
                mantissa: &self.mantissa << (scale - self.scale),
                scale,
            }
        } else {
            Fixed {
                mantissa: shr_trunc(&self.mantissa, self.scale - scale),
                scale,
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn cmp_abs(&self, other: &Self) -> std::cmp::Ordering {
        self.assert_same_scale(other);
        self.mantissa.abs().cmp(&other.mantissa.abs())
    }

    /// True when |self| < 2^{-threshold_bits}.
    pub fn below_power_of_two(&self, threshold_bits: u32) -> bool {
        if threshold_bits >= self.scale {
            return self.mantissa.is_zero();
        }
        self.mantissa.abs() < (BigInt::one() << (self.scale - threshold_bits))
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits();
        if bits <= 1000 {
            let m = self.mantissa.to_f64().unwrap_or(f64::NAN);
            return m * 2f64.powi(-(self.scale as i32));
        }
        let shift = bits - 53;
        let top = shr_trunc(&self.mantissa, shift as u32)
            .to_f64()
            .unwrap_or(f64::NAN);
        top * 2f64.powi(shift as i32 - self.scale as i32)
    }

    /// Decimal rendering with `sig` significant digits (truncated, not
    /// rounded).
    pub fn to_decimal(&self, sig: usize) -> String {
        if self.mantissa.is_zero() {
            return "0".to_string();
        }
        let neg = self.mantissa.is_negative();
        let a = self.mantissa.abs();
        let int = &a >> self.scale;
        let frac = &a - (&int << self.scale);
        let frac_digits = |frac: &BigInt, count: usize| -> String {
            if count == 0 {
                return String::new();
            }
            let scaled = (frac * BigInt::from(10u32).pow(count as u32)) >> self.scale;
            let mut s = scaled.to_string();
            while s.len() < count {
                s.insert(0, '0');
            }
            s
        };
        let body = if !int.is_zero() {
            let int_s = int.to_string();
            let rem = sig.saturating_sub(int_s.len());
            if rem == 0 {
                int_s
            } else {
                format!("{int_s}.{}", frac_digits(&frac, rem))
            }
        } else {
            // 0.xxx: find the leading zeros first
            let bits = frac.bits() as u32;
            let zeros_estimate = ((self.scale - bits) as f64 * std::f64::consts::LOG10_2) as usize;
            let count = zeros_estimate + sig + 2;
            let s = frac_digits(&frac, count);
            let first = s.find(|c| c != '0').unwrap_or(s.len());
            let keep = (first + sig).min(s.len());
            format!("0.{}", &s[..keep])
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// sqrt(n) for a nonnegative integer n, as a fixed-point value.
pub fn sqrt_bigint(n: &BigInt, scale: u32) -> Fixed {
    assert!(!n.is_negative());
    Fixed {
        mantissa: (n << (2 * scale)).sqrt(),
        scale,
    }
}

fn pi_cache() -> &'static Mutex<HashMap<u32, BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// pi by the arctangent formula 16 atan(1/5) - 4 atan(1/239), cached per
/// scale.
pub fn pi(scale: u32) -> Fixed {
    let mut cache = pi_cache().lock().unwrap();
    if let Some(m) = cache.get(&scale) {
        return Fixed {
            mantissa: m.clone(),
            scale,
        };
    }
    let work = scale + 16;
    let atan_inv = |x: u64| -> BigInt {
        // sum_j (-1)^j / ((2j+1) x^(2j+1)) at the working scale
        let unit = BigInt::one() << work;
        let x2 = BigInt::from(x) * BigInt::from(x);
        let mut power = BigInt::from(x);
        let mut j = 0u32;
        let mut acc = BigInt::zero();
        loop {
            let term = &unit / (&power * BigInt::from(2 * j + 1));
            if term.is_zero() {
                break;
            }
            if j.is_multiple_of(2) {
                acc += term;
            } else {
                acc -= term;
            }
            power *= &x2;
            j += 1;
        }
        acc
    };
    let value = atan_inv(5) * BigInt::from(16) - atan_inv(239) * BigInt::from(4);
    let m = shr_trunc(&value, 16);
    cache.insert(scale, m.clone());
    Fixed { mantissa: m, scale }
}

/// pi^e.
pub fn pi_pow(e: u32, scale: u32) -> Fixed {
    let p = pi(scale);
    let mut acc = Fixed::one(scale);
    for _ in 0..e {
        acc = acc.mul(&p);
    }
    acc
}

/// Exact conversion hook for field elements: x + y*sqrt(d) at the given
/// scale (error below a few units in the last place).
pub fn quad_to_fixed(q: &QuadElem, scale: u32) -> Fixed {
    let rat_part = Fixed::from_rational(q.rational_part(), scale);
    if q.is_rational() {
        return rat_part;
    }
    let guard = 16;
    let root = sqrt_bigint(q.radicand(), scale + guard);
    let surd = root.mul_rational(q.surd_coeff()).rescale(scale);
    rat_part.add(&surd)
}

/// cos(pi t) and sin(pi t) for any fixed-point t, reduced exactly mod 2
/// before a Taylor evaluation on [0, 1/2].
pub fn cos_sin_pi(t: &Fixed) -> (Fixed, Fixed) {
    let scale = t.scale;
    let two = BigInt::one() << (scale + 1);
    let one = BigInt::one() << scale;
    let half = BigInt::one() << (scale - 1);

    // reduce mod 2 into [0, 2)
    let mut m = t.mantissa.mod_floor(&two);
    let mut cos_sign = 1;
    let mut sin_sign = 1;
    // [1, 2) -> [0, 1), both flip
    if m >= one {
        m -= &one;
        cos_sign = -cos_sign;
        sin_sign = -sin_sign;
    }
    // (1/2, 1) -> (0, 1/2), cos flips
    if m > half {
        m = &one - &m;
        cos_sign = -cos_sign;
    }

    let x = Fixed { mantissa: m, scale }.mul(&pi(scale));
    let x2 = x.mul(&x);

    // cos: sum (-1)^j x^{2j}/(2j)!   sin: sum (-1)^j x^{2j+1}/(2j+1)!
    let mut cos_acc = Fixed::one(scale);
    let mut cos_term = Fixed::one(scale);
    let mut sin_acc = x.clone();
    let mut sin_term = x;
    let mut j = 0u64;
    loop {
        let next_cos = cos_term
            .mul(&x2)
            .div_bigint(&BigInt::from((2 * j + 1) * (2 * j + 2)))
            .neg();
        let next_sin = sin_term
            .mul(&x2)
            .div_bigint(&BigInt::from((2 * j + 2) * (2 * j + 3)))
            .neg();
        if next_cos.is_zero() && next_sin.is_zero() {
            break;
        }
        cos_acc = cos_acc.add(&next_cos);
        sin_acc = sin_acc.add(&next_sin);
        cos_term = next_cos;
        sin_term = next_sin;
        j += 1;
    }
    if cos_sign < 0 {
        cos_acc = cos_acc.neg();
    }
    if sin_sign < 0 {
        sin_acc = sin_acc.neg();
    }
    (cos_acc, sin_acc)
}

pub fn cos_pi(t: &Fixed) -> Fixed {
    cos_sin_pi(t).0
}

pub fn sin_pi(t: &Fixed) -> Fixed {
    cos_sin_pi(t).1
}
