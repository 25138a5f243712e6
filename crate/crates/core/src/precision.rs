//! A small high-precision real type used for the closed-form constants.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::numtypes::{to_f64, BigRational};

/// Working precision in bits (about 57 decimal digits).
pub const PREC: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

#[derive(Clone)]
pub struct Real(BigFloat);

impl Real {
    pub fn zero() -> Self {
        Real::from_u64(0)
    }

    pub fn one() -> Self {
        Real::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        Real(BigFloat::from_u64(v, PREC))
    }

    pub fn from_i64(v: i64) -> Self {
        let r = Real::from_u64(v.unsigned_abs());
        if v < 0 {
            -r
        } else {
            r
        }
    }

    pub fn from_f64(v: f64) -> Self {
        Real(BigFloat::from_f64(v, PREC))
    }

    /// Rounds a big integer to working precision.
    pub fn from_biguint(n: &BigUint) -> Self {
        if n.is_zero() {
            return Real::zero();
        }
        let keep = 4 * 64;
        let bits = n.bits() as usize;
        let (top, shift) = if bits > keep {
            (n >> (bits - keep), bits - keep)
        } else {
            (n.clone(), 0)
        };
        let words = top.to_u64_digits();
        let e = (64 * words.len() + shift) as i32;
        Real(BigFloat::from_words(&words, Sign::Pos, e).add(&BigFloat::from_u64(0, PREC), PREC, RM))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let r = Real::from_biguint(n.magnitude());
        if n.sign() == num_bigint::Sign::Minus {
            -r
        } else {
            r
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Real::from_bigint(r.numer()) / Real::from_bigint(r.denom())
    }

    pub fn ln(&self) -> Self {
        with_consts(|cc| Real(self.0.ln(PREC, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        with_consts(|cc| Real(self.0.exp(PREC, RM, cc)))
    }

    /// `self^y` for positive `self`.
    pub fn powf(&self, y: &Real) -> Self {
        (y * &self.ln()).exp()
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Exact rational value of the binary float.
    pub fn to_rational(&self) -> BigRational {
        match self.0.as_raw_parts() {
            Some((words, bits, sign, e, _)) if bits > 0 => {
                let m = BigUint::from_slice(
                    &words
                        .iter()
                        .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                        .collect::<Vec<_>>(),
                );
                let shift = e as i64 - 64 * words.len() as i64;
                let m = BigInt::from(m);
                let v = if shift >= 0 {
                    BigRational::from_integer(m << shift as usize)
                } else {
                    BigRational::new(m, BigInt::one() << (-shift) as usize)
                };
                if sign == Sign::Neg {
                    -v
                } else {
                    v
                }
            }
            _ => BigRational::zero(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.to_rational())
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::output::format_sig(&self.to_rational(), 30))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(30);
        write!(
            f,
            "{}",
            crate::output::format_sig(&self.to_rational(), digits)
        )
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                Real(self.0.$m(&rhs.0, PREC, RM))
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(self.0.neg())
    }
}

/// Neumaier-compensated `f64` accumulator for long series of small terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
