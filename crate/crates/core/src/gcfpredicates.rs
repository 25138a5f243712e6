//! Sufficient conditions on a gcf term sequence, checked on a finite
//! prefix: bounded gap ratio (`c_{j+1} - c_j < M c_j`, convergence) and
//! divisible gaps (`(c_{j+1} - c_j) | c_j`, rationals terminate).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::expand::SeqRef;
use crate::numtypes::{rational_string, BigRational};

#[derive(Debug, Clone, PartialEq)]
pub enum Property {
    BoundedGapRatio(BigRational),
    DivisibleGaps,
}

/// Result of a prefix check. Indices are the sequence's own (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct SeqCertificate {
    pub property: Property,
    pub checked_prefix: u64,
    pub holds: bool,
    pub first_violation_index: Option<u64>,
    pub violation_count: u64,
}

impl SeqCertificate {
    pub fn to_json(&self) -> Value {
        let (name, m) = match &self.property {
            Property::BoundedGapRatio(m) => {
                ("bounded_gap_ratio", Value::String(rational_string(m)))
            }
            Property::DivisibleGaps => ("divisible_gaps", Value::Null),
        };
        json!({
            "property": name,
            "M": m,
            "prefix": self.checked_prefix,
            "holds": self.holds,
            "first_violation_index": self.first_violation_index,
            "violation_count": self.violation_count,
        })
    }
}

fn check<F>(seq: &SeqRef, prefix: u64, property: Property, mut ok: F) -> SeqCertificate
where
    F: FnMut(&BigUint, &BigUint) -> bool,
{
    let mut first = None;
    let mut count = 0;
    let mut cur = seq.term(0);
    for j in 0..prefix {
        let next = seq.term(j + 1);
        if !ok(&cur, &next) {
            count += 1;
            first.get_or_insert(j);
        }
        cur = next;
    }
    SeqCertificate {
        property,
        checked_prefix: prefix,
        holds: count == 0,
        first_violation_index: first,
        violation_count: count,
    }
}

/// `c_{j+1} - c_j < M c_j` for every `j < prefix`, in exact arithmetic.
pub fn check_bounded_gap_ratio(seq: &SeqRef, m: &BigRational, prefix: u64) -> SeqCertificate {
    let (mn, md) = (m.numer().clone(), m.denom().clone());
    check(seq, prefix, Property::BoundedGapRatio(m.clone()), |c, d| {
        if d <= c {
            return false;
        }
        let gap = num_bigint::BigInt::from(d - c);
        gap * &md < mn.clone() * num_bigint::BigInt::from(c.clone())
    })
}

/// `(c_{j+1} - c_j) | c_j` for every `j < prefix`.
pub fn check_divisible_gaps(seq: &SeqRef, prefix: u64) -> SeqCertificate {
    check(seq, prefix, Property::DivisibleGaps, |c, d| {
        if d <= c {
            return false;
        }
        let gap = d - c;
        !gap.is_zero() && c.is_multiple_of(&gap)
    })
}
