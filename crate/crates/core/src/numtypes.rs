//! Exact rationals, the base newtype, and the two digit-extraction
//! primitives shared by every expansion.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// An integer base `b >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Base(u64);

impl Base {
    pub fn new(b: u64) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(b));
        }
        Ok(Base(b))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn big(self) -> BigUint {
        BigUint::from(self.0)
    }

    /// `b^a` as an exact integer.
    pub fn pow(self, a: u64) -> BigUint {
        pow_u(&self.big(), a)
    }

    pub fn log2(self) -> f64 {
        (self.0 as f64).log2()
    }
}

impl TryFrom<u64> for Base {
    type Error = Error;
    fn try_from(b: u64) -> Result<Self> {
        Base::new(b)
    }
}

impl From<Base> for u64 {
    fn from(b: Base) -> u64 {
        b.0
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn pow_u(b: &BigUint, mut e: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut sq = b.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Charges extracted terms against the information content of a truncated
/// decimal input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionGuard {
    pub input_digits: usize,
    pub consumed_bits: f64,
}

impl PrecisionGuard {
    pub fn new(input_digits: usize) -> Self {
        PrecisionGuard {
            input_digits,
            consumed_bits: 0.0,
        }
    }

    pub fn budget_bits(&self) -> f64 {
        self.input_digits as f64 * std::f64::consts::LOG2_10
    }

    pub fn remaining_bits(&self) -> f64 {
        self.budget_bits() - self.consumed_bits
    }

    /// Cost of a term `c b^a`: `(a+1) log2 b + 1` bits.
    pub fn term_cost(b: Base, a: u64) -> f64 {
        (a as f64 + 1.0) * b.log2() + 1.0
    }

    /// Records `bits` if they fit in the remaining budget. Returns false,
    /// leaving the tally untouched, if they do not.
    pub fn charge(&mut self, bits: f64) -> bool {
        if self.consumed_bits + bits > self.budget_bits() {
            return false;
        }
        self.consumed_bits += bits;
        true
    }
}

fn parse_err(s: &str) -> Error {
    Error::Parse(s.to_string())
}

/// Parses a signed decimal numeral (optionally with an `e`/`E` exponent) to
/// its exact value. The optional `exponent` scales the result by `10^exponent`.
/// `"0.333"` is `333/1000`, never `1/3`.
pub fn rational_from_decimal(s: &str, exponent: Option<i64>) -> Result<BigRational> {
    parse_decimal(s, exponent).map(|(r, _)| r)
}

/// Like [`rational_from_decimal`] but also returns the count of significant
/// digits in the mantissa.
pub fn parse_decimal(s: &str, exponent: Option<i64>) -> Result<(BigRational, usize)> {
    let t = s.trim();
    let (neg, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mantissa, exp_part) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    let mut exp: i64 = match exp_part {
        Some(e) => e.parse().map_err(|_| parse_err(s))?,
        None => 0,
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(parse_err(s));
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|c| c.is_ascii_digit())
    {
        return Err(parse_err(s));
    }
    let digits: String = [int_part, frac_part].concat();
    let significant = digits.trim_start_matches('0').len();
    let n = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(|| parse_err(s))?;
    exp = exp
        .checked_sub(frac_part.len() as i64)
        .and_then(|e| e.checked_add(exponent.unwrap_or(0)))
        .ok_or_else(|| parse_err(s))?;
    let ten = BigUint::from(10u32);
    let scale = BigInt::from(pow_u(&ten, exp.unsigned_abs()));
    let mut r = if exp >= 0 {
        BigRational::from_integer(n * scale)
    } else {
        BigRational::new(n, scale)
    };
    if neg {
        r = -r;
    }
    Ok((r, significant))
}

/// Parses `"p/q"`, an integer, or a decimal numeral exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| parse_err(s))?;
        let q: BigInt = q.trim().parse().map_err(|_| parse_err(s))?;
        if q.is_zero() {
            return Err(parse_err(s));
        }
        return Ok(BigRational::new(p, q));
    }
    rational_from_decimal(t, None)
}

/// Largest `a` with `b^a <= n` for an integer `n >= 1`, found by squaring
/// search over exact powers of `b`.
pub(crate) fn ilog(n: &BigUint, b: Base) -> u64 {
    debug_assert!(!n.is_zero());
    if b.get() == 2 {
        return n.bits() - 1;
    }
    let mut squares = vec![b.big()];
    while squares.last().unwrap() <= n {
        let s = squares.last().unwrap();
        let next = s * s;
        squares.push(next);
    }
    // b^(2^(len-1)) > n, so a < 2^(len-1)
    let mut a = 0u64;
    let mut acc = BigUint::one();
    for (i, s) in squares.iter().enumerate().rev() {
        let trial = &acc * s;
        if &trial <= n {
            acc = trial;
            a += 1 << i;
        }
    }
    a
}

/// Smallest `m` with `b^m >= n` for an integer `n >= 1`.
fn ilog_ceil(n: &BigUint, b: Base) -> u64 {
    let a = ilog(n, b);
    if &b.pow(a) == n {
        a
    } else {
        a + 1
    }
}

/// The unique `a` with `b^a <= y < b^(a+1)`.
pub fn floor_log_base(y: &BigRational, b: Base) -> Result<i64> {
    if !y.is_positive() {
        return Err(Error::NonPositive);
    }
    let (num, den) = (y.numer().magnitude(), y.denom().magnitude());
    if num >= den {
        Ok(ilog(&(num / den), b) as i64)
    } else {
        // b^a <= y  <=>  b^(-a) >= 1/y  <=>  b^(-a) >= ceil(1/y)
        let z = Integer::div_ceil(den, num);
        Ok(-(ilog_ceil(&z, b) as i64))
    }
}

fn pow_rational(b: Base, a: i64) -> BigRational {
    let p = BigInt::from(b.pow(a.unsigned_abs()));
    if a >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// `c = floor(y / b^a)`, required to lie in `1..=b-1`.
pub fn leading_digit(y: &BigRational, b: Base, a: i64) -> Result<u64> {
    let scaled = y / pow_rational(b, a);
    let c = scaled.floor().to_integer();
    if c.sign() != Sign::Plus || c >= BigInt::from(b.get()) {
        return Err(Error::Precondition(format!(
            "{y} is not in [{b}^{a}, {b}^{})",
            a + 1
        )));
    }
    Ok(c.iter_u64_digits().next().unwrap_or(0))
}

/// Exact rational to the nearest `f64`.
pub fn to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}

/// Formats an exact rational as `"p/q"`, or `"p"` for integers.
pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
