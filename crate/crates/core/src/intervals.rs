//! Rank-n cylinder intervals of the type III continued logarithm and of
//! generalized continued fractions.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expand::{convergents, expand_type3, Expansion, SeqRef, Status, Term, Variant};
use crate::numtypes::{Base, BigRational};

/// Default exponent cap per coordinate when summing over all cylinders.
pub const DEFAULT_K_CAP: u64 = 60;

/// The prefix `l_1 b^{k_1}, ..., l_n b^{k_n}` after the leading term `1 b^0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CylinderSpec {
    pub b: Base,
    pub ks: Vec<u64>,
    pub ls: Vec<u64>,
}

impl CylinderSpec {
    pub fn new(b: Base, ks: Vec<u64>, ls: Vec<u64>) -> Result<Self> {
        let spec = CylinderSpec { b, ks, ls };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rank(&self) -> usize {
        self.ks.len()
    }

    fn validate(&self) -> Result<()> {
        if self.ks.is_empty() || self.ks.len() != self.ls.len() {
            return Err(Error::InvalidParameter(
                "ks and ls must be non-empty and of equal length".into(),
            ));
        }
        for &l in &self.ls {
            if l == 0 || l >= self.b.get() {
                return Err(Error::InvalidDigit {
                    digit: l,
                    max: self.b.get() - 1,
                });
            }
        }
        Ok(())
    }

    /// The spec extended by one more coordinate.
    pub fn child(&self, k: u64, l: u64) -> Self {
        let mut c = self.clone();
        c.ks.push(k);
        c.ls.push(l);
        c
    }

    /// The spec without its last coordinate, or `None` at rank 1.
    pub fn parent(&self) -> Option<Self> {
        (self.rank() > 1).then(|| CylinderSpec {
            b: self.b,
            ks: self.ks[..self.rank() - 1].to_vec(),
            ls: self.ls[..self.rank() - 1].to_vec(),
        })
    }

    fn expansion(&self) -> Expansion {
        let mut terms = vec![Term::power(1, 0)];
        terms.extend(
            self.ks
                .iter()
                .zip(&self.ls)
                .map(|(&k, &l)| Term::power(l, k)),
        );
        Expansion {
            variant: Variant::TypeIII,
            base: Some(self.b),
            sequence: None,
            terms,
            status: Status::TruncatedAtLimit,
            guard: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    fn ordered(a: BigRational, b: BigRational) -> Self {
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    pub fn length(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// True when the open interiors do not meet.
    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }
}

fn lift(x: &BigUint) -> BigInt {
    BigInt::from(x.clone())
}

/// Endpoints `p_n/q_n` and `(p_n + p_{n-1} N)/(q_n + q_{n-1} N)` of the
/// cylinder of an expansion prefix, where `N` is the numerator following
/// the last term.
fn endpoints_of(e: &Expansion) -> (Interval, BigInt, BigInt, BigInt) {
    let cs = convergents(e).expect("non-empty prefix");
    let (_, ns) = e.coefficients();
    let n = cs.len() - 1;
    let num = lift(&ns[n]);
    let (pn, qn) = (&cs[n].p, &cs[n].q);
    let (pm, qm) = if n >= 1 {
        (cs[n - 1].p.clone(), cs[n - 1].q.clone())
    } else {
        (BigInt::one(), BigInt::zero())
    };
    let a = BigRational::new(pn.clone(), qn.clone());
    let b = BigRational::new(pn + &pm * &num, qn + &qm * &num);
    (Interval::ordered(a, b), qn.clone(), qm, num)
}

pub fn cylinder_endpoints(spec: &CylinderSpec) -> Result<Interval> {
    spec.validate()?;
    Ok(endpoints_of(&spec.expansion()).0)
}

/// Measure from the closed form `b^{a_0+...+a_n} / (q_n (q_n + b^{a_n} q_{n-1}))`.
pub fn cylinder_measure(spec: &CylinderSpec) -> Result<BigRational> {
    spec.validate()?;
    let e = spec.expansion();
    let (_, qn, qm, num) = endpoints_of(&e);
    let total: u64 = spec.ks.iter().sum();
    let top = BigInt::from(spec.b.pow(total));
    Ok(BigRational::new(top, &qn * (&qn + num * qm)))
}

fn gcf_expansion(seq: &SeqRef, ks: &[u64]) -> Expansion {
    let mut terms = vec![Term::index(0)];
    terms.extend(ks.iter().map(|&j| Term::index(j)));
    Expansion {
        variant: Variant::Gcf,
        base: None,
        sequence: Some(seq.clone()),
        terms,
        status: Status::TruncatedAtLimit,
        guard: None,
    }
}

/// Cylinder of the gcf prefix `c_0, c_{k_1}, ..., c_{k_n}`.
pub fn cylinder_endpoints_gcf(seq: &SeqRef, ks: &[u64]) -> Result<Interval> {
    if ks.is_empty() {
        return Err(Error::InvalidParameter(
            "index list must be non-empty".into(),
        ));
    }
    Ok(endpoints_of(&gcf_expansion(seq, ks)).0)
}

/// Whether `x` has the expansion prefix described by `spec`, decided from
/// the expansion of `x` itself rather than by endpoint comparison.
pub fn cylinder_contains(spec: &CylinderSpec, x: &BigRational) -> Result<bool> {
    spec.validate()?;
    if x < &BigRational::one() {
        return Ok(false);
    }
    let e = expand_type3(x, spec.b, spec.rank() + 1)?;
    let want = spec.expansion().terms;
    Ok(e.terms.len() == want.len() && e.terms == want)
}

/// Bounds `[1/(4 l (l+1) b^k), 2/(l (l+1) b^k)]` on the ratio of a child
/// cylinder's measure to its parent's.
pub fn ratio_bounds(b: Base, k: u64, l: u64) -> (BigRational, BigRational) {
    let base = BigInt::from(b.pow(k)) * BigInt::from(l * (l + 1));
    (
        BigRational::new(BigInt::one(), &base * 4),
        BigRational::new(BigInt::from(2), base),
    )
}

/// Ratio bounds for a gcf whose gaps satisfy `c_{j+1} - c_j <= M c_j`:
/// `[(g)/((M+1)^2 c_k c_{k+1}), (M+1) g/(c_k c_{k+1})]` with `g = c_{k+1} - c_k`.
pub fn gcf_ratio_bounds(seq: &SeqRef, k: u64, m: &BigRational) -> (BigRational, BigRational) {
    let ck = lift(&seq.term(k));
    let ck1 = lift(&seq.term(k + 1));
    let gap = BigRational::from_integer(&ck1 - &ck);
    let prod = BigRational::from_integer(ck * ck1);
    let m1 = m + BigRational::one();
    (&gap / (&m1 * &m1 * &prod), m1 * gap / prod)
}

/// Exact length of a gcf cylinder.
pub fn gcf_cylinder_measure(seq: &SeqRef, ks: &[u64]) -> Result<BigRational> {
    Ok(cylinder_endpoints_gcf(seq, ks)?.length())
}

/// Every rank-`n` spec with exponents `k <= k_cap`.
pub fn all_specs(b: Base, n: usize, k_cap: u64) -> Vec<CylinderSpec> {
    let mut out = vec![CylinderSpec {
        b,
        ks: vec![],
        ls: vec![],
    }];
    for _ in 0..n {
        let mut next =
            Vec::with_capacity(out.len() * (k_cap as usize + 1) * (b.get() as usize - 1));
        for s in &out {
            for k in 0..=k_cap {
                for l in 1..b.get() {
                    next.push(s.child(k, l));
                }
            }
        }
        out = next;
    }
    out
}

/// Total measure of all rank-`n` cylinders with exponents `<= k_cap`,
/// with the bound `2 n b^{-(k_cap+1)}` on the omitted mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedTotal {
    pub total: BigRational,
    pub tail_bound: BigRational,
}

pub fn rank_total(b: Base, n: usize, k_cap: u64) -> Result<TruncatedTotal> {
    if n == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    let mut total = BigRational::zero();
    for s in all_specs(b, n, k_cap) {
        total += cylinder_measure(&s)?;
    }
    Ok(TruncatedTotal {
        total,
        tail_bound: tail_bound(b, n, k_cap),
    })
}

fn tail_bound(b: Base, n: usize, k_cap: u64) -> BigRational {
    BigRational::new(BigInt::from(2 * n as u64), BigInt::from(b.pow(k_cap + 1)))
}

/// Measure of `{alpha : the (n+1)th term is l b^k}` summed over rank-`n`
/// parents with exponents `<= k_cap`; `n = 0` is the rank-1 cylinder itself.
pub fn term_mass(b: Base, n: usize, k: u64, l: u64, k_cap: u64) -> Result<TruncatedTotal> {
    let mut total = BigRational::zero();
    if n == 0 {
        total = cylinder_measure(&CylinderSpec::new(b, vec![k], vec![l])?)?;
    } else {
        for s in all_specs(b, n, k_cap) {
            total += cylinder_measure(&s.child(k, l))?;
        }
    }
    let tail = if n == 0 {
        BigRational::zero()
    } else {
        tail_bound(b, n, k_cap)
    };
    Ok(TruncatedTotal {
        total,
        tail_bound: tail,
    })
}
