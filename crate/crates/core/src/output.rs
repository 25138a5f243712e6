//! Decimal formatting of exact values.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::numtypes::{pow_u, BigRational};

/// Default significant digits for printed reals.
pub const DEFAULT_DIGITS: usize = 12;

fn ten_pow(e: u64) -> BigUint {
    pow_u(&BigUint::from(10u32), e)
}

/// `floor(log10 x)` for `x > 0`.
fn floor_log10(num: &BigUint, den: &BigUint) -> i64 {
    let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
    // 10^e <= num/den  <=>  10^e den <= num (e >= 0) or den <= num 10^-e
    let le = |e: i64| {
        if e >= 0 {
            den * ten_pow(e as u64) <= *num
        } else {
            *den <= num * ten_pow((-e) as u64)
        }
    };
    while !le(e) {
        e -= 1;
    }
    while le(e + 1) {
        e += 1;
    }
    e
}

/// Formats `x` with `digits` significant digits in the style of C's `%g`:
/// fixed notation for moderate exponents, scientific otherwise, trailing
/// zeros dropped. Rounding is half-to-even on the exact value.
pub fn format_sig(x: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    let neg = x.is_negative();
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    let mut e10 = floor_log10(&num, &den);
    let shift = digits as i64 - 1 - e10;
    let (n, d) = if shift >= 0 {
        (num * ten_pow(shift as u64), den)
    } else {
        (num, den * ten_pow((-shift) as u64))
    };
    let (mut q, r) = n.div_rem(&d);
    let twice = r * 2u32;
    if twice > d || (twice == d && q.is_odd()) {
        q += 1u32;
    }
    if q == ten_pow(digits as u64) {
        q /= 10u32;
        e10 += 1;
    }
    let s = q.to_string();
    let body = if e10 >= -5 && e10 < digits as i64 {
        if e10 >= 0 {
            let (int, frac) = s.split_at(e10 as usize + 1);
            join_fixed(int, frac)
        } else {
            let zeros = "0".repeat((-e10 - 1) as usize);
            join_fixed("0", &format!("{zeros}{s}"))
        }
    } else {
        let (lead, frac) = s.split_at(1);
        let m = join_fixed(lead, frac);
        format!("{m}e{}{:02}", if e10 < 0 { '-' } else { '+' }, e10.abs())
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn join_fixed(int: &str, frac: &str) -> String {
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int.to_string()
    } else {
        format!("{int}.{frac}")
    }
}

/// Formats an `f64` through its exact binary value.
pub fn format_f64(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    match BigRational::from_float(x) {
        Some(r) => format_sig(&r, digits),
        None => x.to_string(),
    }
}
