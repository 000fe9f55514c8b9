//! Membership and word decomposition in the level-2 principal congruence
//! subgroup of PSL2(Z), free on the generators
//! `A = (1 2; 0 1)` and `B = (1 0; 2 1)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::mat2::Mat2Z;
use crate::quad::QuadElem;
use crate::units::{j_matrix, lattice_order};

/// A generator letter or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    pub fn matrix(self) -> Mat2Z {
        match self {
            Letter::A => Mat2Z::new(1, 2, 0, 1),
            Letter::AInv => Mat2Z::new(1, -2, 0, 1),
            Letter::B => Mat2Z::new(1, 0, 2, 1),
            Letter::BInv => Mat2Z::new(1, 0, -2, 1),
        }
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }
}

/// A word in the free generators together with a sign: the ordered product of
/// the letters equals `sign * M` for the matrix `M` it decomposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma2Word {
    pub letters: Vec<Letter>,
    pub sign: i8,
}

impl Gamma2Word {
    pub fn product(&self) -> Mat2Z {
        let mut m = Mat2Z::identity();
        for l in &self.letters {
            m = &m * &l.matrix();
        }
        m
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// True iff `M` is congruent to the identity mod 2 (equivalently, to minus
/// the identity). Requires `det M = 1`.
pub fn gamma2_membership(m: &Mat2Z) -> bool {
    debug_assert!(m.det().is_one());
    m.a.is_odd() && m.d.is_odd() && m.b.is_even() && m.c.is_even()
}

/// Nearest integer to `num/den` (exact ties cannot occur at our call sites;
/// ties round toward +infinity).
fn nearest_int(num: &BigInt, den: &BigInt) -> BigInt {
    let (num, den) = if den.is_negative() {
        (-num.clone(), -den.clone())
    } else {
        (num.clone(), den.clone())
    };
    (BigInt::from(2) * num + &den).div_floor(&(BigInt::from(2) * den))
}

fn push_power(out: &mut Vec<Letter>, base: Letter, exponent: &BigInt) {
    let e = exponent.to_i64_checked();
    let letter = if e < 0 { base.inverse() } else { base };
    for _ in 0..e.unsigned_abs() {
        out.push(letter);
    }
}

/// Decomposes a member of the subgroup as a word in `A, B` and their
/// inverses, with an overall sign.
///
/// The reduction repeatedly clears the bottom-left entry: a power of `A`
/// shrinks `a` below `|c|` (possible since `a` is odd and `c` even), then a
/// power of `B` shrinks `c` below `|a|`. The recorded inverses, read in
/// order, form the word.
pub fn gamma2_word(m: &Mat2Z) -> Result<Gamma2Word> {
    if !m.det().is_one() || !gamma2_membership(m) {
        return Err(Error::NotInGamma2);
    }
    let mut cur = m.clone();
    let mut ops: Vec<(Letter, BigInt)> = Vec::new();
    while !cur.c.is_zero() {
        // A^n * cur replaces a by a + 2n c; pick n minimizing |a + 2n c|
        let n = nearest_int(&-&cur.a, &(BigInt::from(2) * &cur.c));
        if !n.is_zero() {
            cur = &Letter::A.matrix().pow(n.to_i64_checked()) * &cur;
            ops.push((Letter::A, n));
        }
        debug_assert!(cur.a.abs() < cur.c.abs());
        if cur.c.is_zero() {
            break;
        }
        // B^m * cur replaces c by c + 2m a; pick m minimizing |c + 2m a|
        let n = nearest_int(&-&cur.c, &(BigInt::from(2) * &cur.a));
        if !n.is_zero() {
            cur = &Letter::B.matrix().pow(n.to_i64_checked()) * &cur;
            ops.push((Letter::B, n));
        }
        debug_assert!(cur.c.abs() < cur.a.abs());
    }
    // cur = sign * A^t
    let sign = if cur.a.is_positive() { 1i8 } else { -1 };
    debug_assert_eq!(cur.a, cur.d);
    debug_assert!(cur.b.is_even());
    let t = if sign > 0 {
        cur.b.clone() / BigInt::from(2)
    } else {
        -cur.b.clone() / BigInt::from(2)
    };

    let mut letters = Vec::new();
    for (base, n) in &ops {
        push_power(&mut letters, *base, &-n.clone());
    }
    push_power(&mut letters, Letter::A, &t);
    Ok(Gamma2Word { letters, sign })
}

trait ToI64Checked {
    fn to_i64_checked(&self) -> i64;
}

impl ToI64Checked for BigInt {
    fn to_i64_checked(&self) -> i64 {
        use num_traits::ToPrimitive;
        self.to_i64().expect("generator exponent overflows i64")
    }
}

/// The smallest power `m <= 6` of the fundamental totally positive unit whose
/// j-matrix lies in the subgroup, together with that matrix. It fixes alpha
/// under the Moebius action and differs from plus or minus the identity.
pub fn gamma2_fixing_matrix(alpha: &QuadElem) -> Result<(Mat2Z, u32)> {
    let order = lattice_order(alpha)?;
    let j = j_matrix(&order.gamma, alpha)?;
    let mut power = j.clone();
    for m in 1..=6u32 {
        if gamma2_membership(&power) {
            return Ok((power, m));
        }
        power = &power * &j;
    }
    unreachable!("the subgroup has index 6, so some power at most 6 lands in it")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::parse_quad;

    #[test]
    fn membership_examples() {
        assert!(gamma2_membership(&Mat2Z::new(3, 4, 2, 3)));
        assert!(!gamma2_membership(&Mat2Z::new(2, 1, 1, 1)));
        assert!(gamma2_membership(&Letter::A.matrix()));
        assert!(gamma2_membership(&Mat2Z::identity().neg()));
    }

    #[test]
    fn word_examples() {
        let w = gamma2_word(&Mat2Z::new(3, 4, 2, 3)).unwrap();
        assert_eq!(w.letters, vec![Letter::A, Letter::BInv, Letter::A]);
        assert_eq!(w.sign, -1);
        // product of the letters equals sign * M
        assert_eq!(w.product(), Mat2Z::new(-3, -4, -2, -3));

        let w = gamma2_word(&Letter::A.matrix()).unwrap();
        assert_eq!(w.letters, vec![Letter::A]);
        assert_eq!(w.sign, 1);

        let w = gamma2_word(&Mat2Z::identity()).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.sign, 1);

        let w = gamma2_word(&Mat2Z::identity().neg()).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.sign, -1);
    }

    #[test]
    fn word_rejects_non_members() {
        assert_eq!(
            gamma2_word(&Mat2Z::new(2, 1, 1, 1)),
            Err(Error::NotInGamma2)
        );
    }

    #[test]
    fn fixing_matrix_examples() {
        let (c, m) = gamma2_fixing_matrix(&parse_quad("sqrt(2)").unwrap()).unwrap();
        assert_eq!((c, m), (Mat2Z::new(3, 4, 2, 3), 1));

        let (c, m) = gamma2_fixing_matrix(&parse_quad("(1+sqrt(5))/2").unwrap()).unwrap();
        assert_eq!((c, m), (Mat2Z::new(13, 8, 8, 5), 3));
    }

    #[test]
    fn fixing_matrix_fixes_alpha_exactly() {
        for s in ["sqrt(2)", "sqrt(3)", "(1+sqrt(5))/2", "1+sqrt(3)", "2+sqrt(2)", "2*sqrt(2)"] {
            let alpha = parse_quad(s).unwrap();
            let (c, _) = gamma2_fixing_matrix(&alpha).unwrap();
            assert_eq!(c.act(&alpha).unwrap(), alpha, "{s}");
            assert!(!c.is_identity() && !c.neg().is_identity());
        }
    }

    #[test]
    fn word_round_trip_random() {
        // deterministic xorshift so the test is reproducible
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..1000 {
            let len = (rng() % 31) as usize;
            let mut letters = Vec::with_capacity(len);
            let mut m = Mat2Z::identity();
            for _ in 0..len {
                let l = match rng() % 4 {
                    0 => Letter::A,
                    1 => Letter::AInv,
                    2 => Letter::B,
                    _ => Letter::BInv,
                };
                letters.push(l);
                m = &m * &l.matrix();
            }
            let w = gamma2_word(&m).unwrap();
            let p = w.product();
            let matches = if w.sign > 0 {
                p == m
            } else {
                p == m.neg()
            };
            assert!(matches, "round trip failed for word of length {len}");
            assert!(
                w.len() <= len,
                "decomposition ({} letters) longer than input ({len})",
                w.len()
            );
        }
    }
}
