//! Exact arithmetic in real quadratic fields Q(sqrt(D)).
//!
//! A `QuadElem` is `x + y*sqrt(d)` with rational `x`, `y` and `d` a squarefree
//! integer >= 2. Rational numbers are embedded as elements with `y = 0` and
//! carry the marker `d = 0`, so equality and hashing stay structural. The real
//! embedding is fixed once and for all by `sqrt(d) > 0`; the Galois conjugate
//! is plain data `(x, -y, d)`, never a second embedding.
//!
//! All comparisons are exact: signs are decided by comparing squares of
//! rationals, floors by integer square root bracketing. No floating point is
//! involved anywhere in this module except the advisory `approx_f64`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElem {
    x: Rational,
    y: Rational,
    /// Squarefree radicand >= 2, or 0 for rational elements.
    d: BigInt,
}

/// Splits `n >= 0` as `kernel * square^2` with `kernel` squarefree.
///
/// Complete for all `n < 2^63`; beyond that, square factors whose smallest
/// prime exceeds 10^6 may be left in the kernel (no such radicand arises from
/// the supported input range).
fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_negative());
    let mut kernel = BigInt::one();
    let mut square = BigInt::one();
    let mut rest = n.clone();
    if rest.is_zero() {
        return (BigInt::zero(), BigInt::one());
    }
    let mut p = BigInt::from(2u32);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= rest && p <= limit {
        let mut count = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            count += 1;
        }
        if count % 2 == 1 {
            kernel *= &p;
        }
        for _ in 0..count / 2 {
            square *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    // The remaining cofactor has no prime factor <= 10^6. Below 2^63 it has
    // at most two prime factors, so it is squarefree unless it is itself a
    // perfect square.
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
            rest = BigInt::one();
        }
    }
    (kernel * rest, square)
}

impl QuadElem {
    /// Canonical element `x + y*sqrt(radicand)`, folding square factors of the
    /// radicand into `y`. `radicand` must be nonnegative.
    pub fn new(x: Rational, y: Rational, radicand: BigInt) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::Parse(format!(
                "negative radicand {radicand}: complex fields are not supported"
            )));
        }
        if y.is_zero() || radicand.is_zero() {
            return Ok(Self::from_rational(x));
        }
        let (kernel, square) = squarefree_split(&radicand);
        let y = y * Rational::from_integer(square);
        if kernel.is_one() {
            return Ok(Self::from_rational(x + y));
        }
        Ok(QuadElem { x, y, d: kernel })
    }

    pub fn from_rational(x: Rational) -> Self {
        QuadElem {
            x,
            y: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `sqrt(n)` for a nonnegative rational `n`.
    pub fn sqrt_of(n: &Rational) -> Result<Self> {
        if n.is_negative() {
            return Err(Error::Parse(format!(
                "negative radicand {n}: complex fields are not supported"
            )));
        }
        // sqrt(p/q) = sqrt(p*q)/q
        let radicand = n.numer() * n.denom();
        Self::new(
            Rational::zero(),
            Rational::new(BigInt::one(), n.denom().clone()),
            radicand,
        )
    }

    pub fn rational_part(&self) -> &Rational {
        &self.x
    }

    pub fn surd_coeff(&self) -> &Rational {
        &self.y
    }

    /// Squarefree radicand; zero for rational elements.
    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn is_irrational(&self) -> bool {
        !self.is_rational()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.x)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// Checks two elements live in a common field and returns the radicand.
    fn common_radicand(&self, other: &Self) -> Result<BigInt> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(Error::MixedFields(self.d.clone(), other.d.clone())),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        Ok(QuadElem {
            x: &self.x + &other.x,
            y: &self.y + &other.y,
            d,
        }
        .renormalize())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&(-other))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let d = self.common_radicand(other)?;
        let dr = Rational::from_integer(d.clone());
        Ok(QuadElem {
            x: &self.x * &other.x + &self.y * &other.y * &dr,
            y: &self.x * &other.y + &self.y * &other.x,
            d,
        }
        .renormalize())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    fn renormalize(mut self) -> Self {
        if self.y.is_zero() {
            self.d = BigInt::zero();
        }
        self
    }

    /// Galois conjugate `x - y*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadElem {
            x: self.x.clone(),
            y: -self.y.clone(),
            d: self.d.clone(),
        }
    }

    /// Field norm `x^2 - y^2 d`, a rational.
    pub fn norm(&self) -> Rational {
        &self.x * &self.x - &self.y * &self.y * Rational::from_integer(self.d.clone())
    }

    /// Field trace `2x`, a rational.
    pub fn trace(&self) -> Rational {
        &self.x + &self.x
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        debug_assert!(!n.is_zero(), "nonzero element with zero norm");
        Ok(QuadElem {
            x: &self.x / &n,
            y: -(&self.y / &n),
            d: self.d.clone(),
        }
        .renormalize())
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut base = self.clone();
        let mut e = e as u64;
        let mut acc = QuadElem::from_int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadElem {
            x: &self.x * r,
            y: &self.y * r,
            d: self.d.clone(),
        }
        .renormalize()
    }

    /// Exact sign: -1, 0, or +1.
    pub fn sign(&self) -> i32 {
        let sx = rational_sign(&self.x);
        if self.y.is_zero() {
            return sx;
        }
        let sy = rational_sign(&self.y);
        if sx == 0 {
            return sy;
        }
        if sx == sy {
            return sx;
        }
        // Opposite signs: compare x^2 with y^2 d. Equality is impossible for
        // squarefree d >= 2.
        let x2 = &self.x * &self.x;
        let y2d = &self.y * &self.y * Rational::from_integer(self.d.clone());
        match x2.cmp(&y2d) {
            std::cmp::Ordering::Greater => sx,
            std::cmp::Ordering::Less => sy,
            std::cmp::Ordering::Equal => unreachable!("sqrt(d) rational"),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    /// Exact floor via integer square root bracketing.
    pub fn floor(&self) -> BigInt {
        if self.y.is_zero() {
            return self.x.floor().to_integer();
        }
        // floor(y sqrt(d)) for y = p/q, q > 0
        let p = self.y.numer();
        let q = self.y.denom();
        let m = p * p * &self.d;
        let root = m.sqrt(); // floor of sqrt(m)
        let surd_floor = if p.is_negative() {
            // y sqrt(d) irrational, so ceil = floor + 1
            -(root.div_floor(q)) - 1
        } else {
            root.div_floor(q)
        };
        let mut f = self.x.floor().to_integer() + surd_floor;
        // The fractional parts may carry; fix up exactly.
        loop {
            let upper = Self::from_rational(Rational::from_integer(&f + 1));
            if self.checked_sub(&upper).unwrap().sign() >= 0 {
                f += 1;
                continue;
            }
            let lower = Self::from_rational(Rational::from_integer(f.clone()));
            if self.checked_sub(&lower).unwrap().sign() < 0 {
                f -= 1;
                continue;
            }
            return f;
        }
    }

    /// `(sign, floor)` in one call.
    pub fn sign_floor(&self) -> (i32, BigInt) {
        (self.sign(), self.floor())
    }

    /// Exact comparison; both elements must be comparable (same field or one
    /// rational).
    pub fn cmp_exact(&self, other: &Self) -> std::cmp::Ordering {
        let diff = self
            .checked_sub(other)
            .expect("cmp_exact requires elements of one field");
        match diff.sign() {
            s if s < 0 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        }
    }

    /// Advisory floating-point approximation (diagnostics only).
    pub fn approx_f64(&self) -> f64 {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        x + y * d.sqrt()
    }
}

fn rational_sign(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: &QuadElem) -> QuadElem {
                self.$checked(rhs)
                    .expect("operands must live in one quadratic field")
            }
        }
        impl $trait for QuadElem {
            type Output = QuadElem;
            fn $method(self, rhs: QuadElem) -> QuadElem {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            x: -self.x.clone(),
            y: -self.y.clone(),
            d: self.d.clone(),
        }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        -&self
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        if self.y.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.x, -self.y.clone(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.x, self.y, self.d)
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

fn tokenize(input: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &input[start..i];
                let n = lit
                    .parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad integer {lit:?}: {e}")))?;
                tokens.push(Token::Int(n));
            }
            's' if input[i..].starts_with("sqrt") => {
                tokens.push(Token::Sqrt);
                i += 4;
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character {c:?} at position {i}"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.next() {
            Some(found) if found == t => Ok(()),
            found => Err(Error::Parse(format!("expected {t:?}, found {found:?}"))),
        }
    }

    fn expr(&mut self) -> Result<QuadElem> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.checked_add(&rhs)?;
                }
                Some(Token::Minus) => {
                    self.next();
                    let rhs = self.term()?;
                    acc = acc.checked_sub(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QuadElem> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = acc.checked_mul(&rhs)?;
                }
                Some(Token::Slash) => {
                    self.next();
                    let rhs = self.factor()?;
                    acc = acc.checked_div(&rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QuadElem> {
        match self.peek() {
            Some(Token::Minus) => {
                self.next();
                Ok(-self.factor()?)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<QuadElem> {
        match self.next() {
            Some(Token::Int(n)) => Ok(QuadElem::from_rational(Rational::from_integer(n))),
            Some(Token::Sqrt) => {
                self.expect(Token::LParen)?;
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                let r = inner
                    .as_rational()
                    .ok_or_else(|| Error::Parse("nested irrational under sqrt".into()))?;
                QuadElem::sqrt_of(r)
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            found => Err(Error::Parse(format!("unexpected token {found:?}"))),
        }
    }
}

/// Parses expressions like `sqrt(2)`, `(1+sqrt(5))/2`, `17-12*sqrt(2)`,
/// `2*sqrt(2)`, `-3/4` into a canonical `QuadElem`.
pub fn parse_quad(input: &str) -> Result<QuadElem> {
    let tokens = tokenize(input)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Parse(format!(
            "trailing input after position {}",
            p.pos
        )));
    }
    Ok(e)
}
