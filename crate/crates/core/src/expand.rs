//! The expansion processes for continued logarithms of types I, II, III and
//! for generalized continued fractions, with convergents and the
//! equivalence transforms built on them.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numtypes::{ilog, parse_decimal, Base, BigRational, PrecisionGuard};

/// Default term limit for rational inputs.
pub const DEFAULT_MAX_TERMS: usize = 64;
/// Largest accepted term limit.
pub const HARD_MAX_TERMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    TypeI,
    TypeII,
    TypeIII,
    Gcf,
}

impl Variant {
    /// Parses `1`, `2`, `3`, `gcf` or the variant name.
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "i" | "typei" => Ok(Variant::TypeI),
            "2" | "ii" | "typeii" => Ok(Variant::TypeII),
            "3" | "iii" | "typeiii" => Ok(Variant::TypeIII),
            "gcf" => Ok(Variant::Gcf),
            _ => Err(Error::InvalidParameter(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Terminated,
    TruncatedAtLimit,
    PrecisionExhausted,
}

/// One term: `c b^a` for the continued logarithms, or the index `j` of the
/// term `c_j` of a generalized continued fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Term {
    Power { c: u64, a: u64 },
    Index { j: u64 },
}

impl Term {
    pub fn power(c: u64, a: u64) -> Self {
        Term::Power { c, a }
    }

    pub fn index(j: u64) -> Self {
        Term::Index { j }
    }

    /// `(c, a)` of a power term.
    pub fn digits(&self) -> Option<(u64, u64)> {
        match *self {
            Term::Power { c, a } => Some((c, a)),
            Term::Index { .. } => None,
        }
    }

    /// `j` of an index term.
    pub fn gcf_index(&self) -> Option<u64> {
        match *self {
            Term::Index { j } => Some(j),
            Term::Power { .. } => None,
        }
    }
}

/// A strictly increasing integer sequence with `c_0 = 1`.
pub trait TermSequence: Send + Sync + fmt::Debug {
    fn term(&self, j: u64) -> BigUint;

    /// Identifier accepted by [`sequence_by_name`].
    fn name(&self) -> String;

    /// Largest `j` with `c_j <= y` for an integer `y >= 1`.
    fn index_at_most(&self, y: &BigUint) -> Option<u64> {
        if y.is_zero() {
            return None;
        }
        let mut hi = 1u64;
        while self.term(hi) <= *y {
            hi = hi.checked_mul(2)?;
        }
        let mut lo = hi / 2;
        if hi == 1 {
            return Some(0);
        }
        // c_lo <= y < c_hi
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.term(mid) <= *y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(lo)
    }
}

pub type SeqRef = Arc<dyn TermSequence>;

/// `1, 2, 3, ...`: the gcf process is the simple continued fraction.
#[derive(Debug, Clone, Copy)]
pub struct Naturals;

impl TermSequence for Naturals {
    fn term(&self, j: u64) -> BigUint {
        BigUint::from(j) + 1u32
    }
    fn name(&self) -> String {
        "naturals".into()
    }
    fn index_at_most(&self, y: &BigUint) -> Option<u64> {
        (y - 1u32).to_u64()
    }
}

/// `1, b, b^2, ...`: the gcf process is the type I continued logarithm.
#[derive(Debug, Clone, Copy)]
pub struct Powers(pub Base);

impl TermSequence for Powers {
    fn term(&self, j: u64) -> BigUint {
        self.0.pow(j)
    }
    fn name(&self) -> String {
        format!("powers:{}", self.0)
    }
    fn index_at_most(&self, y: &BigUint) -> Option<u64> {
        (!y.is_zero()).then(|| ilog(y, self.0))
    }
}

/// The values `l b^k` (`1 <= l < b`) in increasing order, indexed by
/// `j = k(b-1) + l - 1`: the gcf process is the type III continued logarithm.
#[derive(Debug, Clone, Copy)]
pub struct TypeIIISeq(pub Base);

impl TermSequence for TypeIIISeq {
    fn term(&self, j: u64) -> BigUint {
        let w = self.0.get() - 1;
        self.0.pow(j / w) * (j % w + 1)
    }
    fn name(&self) -> String {
        format!("type3:{}", self.0)
    }
    fn index_at_most(&self, y: &BigUint) -> Option<u64> {
        if y.is_zero() {
            return None;
        }
        let k = ilog(y, self.0);
        let l = (y / self.0.pow(k)).to_u64()?;
        Some(k * (self.0.get() - 1) + l - 1)
    }
}

/// `c_j = (j+1)!`.
#[derive(Debug, Clone, Copy)]
pub struct Factorials;

impl TermSequence for Factorials {
    fn term(&self, j: u64) -> BigUint {
        (1..=j + 1).fold(BigUint::one(), |acc, i| acc * i)
    }
    fn name(&self) -> String {
        "factorials".into()
    }
}

/// A sequence given by a closure. The caller is responsible for `c_0 = 1`
/// and strict increase.
#[derive(Clone)]
pub struct FnSequence {
    pub label: String,
    pub f: Arc<dyn Fn(u64) -> BigUint + Send + Sync>,
}

impl fmt::Debug for FnSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnSequence({})", self.label)
    }
}

impl TermSequence for FnSequence {
    fn term(&self, j: u64) -> BigUint {
        (self.f)(j)
    }
    fn name(&self) -> String {
        self.label.clone()
    }
}

/// Looks up a built-in sequence: `naturals`, `factorials`, `powers:B`,
/// `type3:B`.
pub fn sequence_by_name(name: &str) -> Result<SeqRef> {
    let bad = || Error::InvalidParameter(format!("unknown sequence {name:?}"));
    let base = |s: &str| -> Result<Base> { Base::new(s.parse().map_err(|_| bad())?) };
    match name.split_once(':') {
        None if name == "naturals" => Ok(Arc::new(Naturals)),
        None if name == "factorials" => Ok(Arc::new(Factorials)),
        Some(("powers", b)) => Ok(Arc::new(Powers(base(b)?))),
        Some(("type3", b)) => Ok(Arc::new(TypeIIISeq(base(b)?))),
        _ => Err(bad()),
    }
}

/// An input value: exact, or a truncated decimal whose digits bound how
/// many terms are meaningful.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Exact(BigRational),
    Truncated {
        value: BigRational,
        guard: PrecisionGuard,
    },
}

impl Input {
    /// A decimal numeral treated as a truncated real.
    pub fn decimal(s: &str) -> Result<Self> {
        let (value, digits) = parse_decimal(s, None)?;
        Ok(Input::Truncated {
            value,
            guard: PrecisionGuard::new(digits),
        })
    }

    pub fn value(&self) -> &BigRational {
        match self {
            Input::Exact(v) | Input::Truncated { value: v, .. } => v,
        }
    }
}

impl From<BigRational> for Input {
    fn from(r: BigRational) -> Self {
        Input::Exact(r)
    }
}

impl From<&BigRational> for Input {
    fn from(r: &BigRational) -> Self {
        Input::Exact(r.clone())
    }
}

#[derive(Clone)]
pub struct Expansion {
    pub variant: Variant,
    /// Base of a continued logarithm; `None` for a gcf.
    pub base: Option<Base>,
    /// Term sequence of a gcf; `None` otherwise.
    pub sequence: Option<SeqRef>,
    pub terms: Vec<Term>,
    pub status: Status,
    /// Final guard state for truncated inputs.
    pub guard: Option<PrecisionGuard>,
}

impl fmt::Debug for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Expansion")
            .field("variant", &self.variant)
            .field("base", &self.base)
            .field("sequence", &self.sequence.as_ref().map(|s| s.name()))
            .field("terms", &self.terms)
            .field("status", &self.status)
            .finish()
    }
}

impl PartialEq for Expansion {
    fn eq(&self, other: &Self) -> bool {
        self.variant == other.variant
            && self.base == other.base
            && self.sequence.as_ref().map(|s| s.name()) == other.sequence.as_ref().map(|s| s.name())
            && self.terms == other.terms
            && self.status == other.status
    }
}

enum Kind {
    Clog(Variant, Base),
    Gcf(SeqRef),
}

fn check_input(input: &Input, max_terms: usize) -> Result<(BigUint, BigUint)> {
    if max_terms > HARD_MAX_TERMS {
        return Err(Error::InvalidParameter(format!(
            "max_terms above {HARD_MAX_TERMS}"
        )));
    }
    let x = input.value();
    if x < &BigRational::one() {
        return Err(Error::BelowOne(crate::numtypes::rational_string(x)));
    }
    Ok((x.numer().magnitude().clone(), x.denom().magnitude().clone()))
}

fn run(kind: Kind, input: Input, max_terms: usize) -> Result<Expansion> {
    let (mut u, mut v) = check_input(&input, max_terms)?;
    let mut guard = match &input {
        Input::Exact(_) => None,
        Input::Truncated { guard, .. } => Some(guard.clone()),
    };
    let mut terms = Vec::new();
    let status;
    // y = u/v >= 1 is carried unreduced; only common factors of two are
    // stripped, which is cheap and keeps binary expansions compact.
    loop {
        if terms.len() >= max_terms {
            status = Status::TruncatedAtLimit;
            break;
        }
        let q = &u / &v;
        let (term, sub, numer, cost) = match &kind {
            Kind::Clog(variant, b) => {
                let a = ilog(&q, *b);
                let pw = b.pow(a);
                let c = if *variant == Variant::TypeI {
                    1
                } else {
                    (&q / &pw).to_u64().unwrap_or(0)
                };
                let sub = &pw * c;
                let numer = match variant {
                    Variant::TypeI => &pw * (b.get() - 1),
                    Variant::TypeII => sub.clone(),
                    _ => pw,
                };
                (
                    Term::power(c, a),
                    sub,
                    numer,
                    PrecisionGuard::term_cost(*b, a),
                )
            }
            Kind::Gcf(seq) => {
                let j = seq.index_at_most(&q).ok_or_else(|| {
                    Error::InvalidParameter(format!("sequence index for {q} exceeds u64"))
                })?;
                let sub = seq.term(j);
                let next = seq.term(j + 1);
                let cost = next.bits() as f64 + 1.0;
                (Term::index(j), sub.clone(), next - sub, cost)
            }
        };
        if let Some(g) = guard.as_mut() {
            if !g.charge(cost) {
                if terms.is_empty() {
                    g.consumed_bits += cost;
                } else {
                    status = Status::PrecisionExhausted;
                    break;
                }
            }
        }
        terms.push(term);
        let tv = &sub * &v;
        if u == tv {
            status = Status::Terminated;
            break;
        }
        let nu = numer * &v;
        let nv = u - tv;
        let tz = nu
            .trailing_zeros()
            .unwrap_or(0)
            .min(nv.trailing_zeros().unwrap_or(0));
        u = nu >> tz;
        v = nv >> tz;
    }
    let (variant, base, sequence) = match kind {
        Kind::Clog(variant, b) => (variant, Some(b), None),
        Kind::Gcf(seq) => (Variant::Gcf, None, Some(seq)),
    };
    Ok(Expansion {
        variant,
        base,
        sequence,
        terms,
        status,
        guard,
    })
}

/// Type I: `y_{n+1} = (b-1) b^{a_n} / (y_n - b^{a_n})`.
pub fn expand_type1(x: impl Into<Input>, b: Base, max_terms: usize) -> Result<Expansion> {
    run(Kind::Clog(Variant::TypeI, b), x.into(), max_terms)
}

/// Type II: `y_{n+1} = c_n b^{a_n} / (y_n - c_n b^{a_n})`.
pub fn expand_type2(x: impl Into<Input>, b: Base, max_terms: usize) -> Result<Expansion> {
    run(Kind::Clog(Variant::TypeII, b), x.into(), max_terms)
}

/// Type III: `y_{n+1} = b^{a_n} / (y_n - c_n b^{a_n})`.
pub fn expand_type3(x: impl Into<Input>, b: Base, max_terms: usize) -> Result<Expansion> {
    run(Kind::Clog(Variant::TypeIII, b), x.into(), max_terms)
}

/// Generalized continued fraction over `seq`:
/// `y_{n+1} = (c_{j+1} - c_j) / (y_n - c_j)` with `j = max{j : c_j <= y_n}`.
pub fn expand_gcf(x: impl Into<Input>, seq: SeqRef, max_terms: usize) -> Result<Expansion> {
    run(Kind::Gcf(seq), x.into(), max_terms)
}

pub fn expand(
    variant: Variant,
    x: impl Into<Input>,
    b: Base,
    max_terms: usize,
) -> Result<Expansion> {
    match variant {
        Variant::Gcf => expand_gcf(x, Arc::new(Powers(b)), max_terms),
        v => run(Kind::Clog(v, b), x.into(), max_terms),
    }
}

/// Raw recurrence values `(p_n, q_n)`; not reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergentPair {
    pub p: BigInt,
    pub q: BigInt,
}

impl ConvergentPair {
    pub fn value(&self) -> BigRational {
        BigRational::new(self.p.clone(), self.q.clone())
    }
}

impl Expansion {
    /// Builds an expansion from explicit terms, checking the term
    /// invariants of the variant.
    pub fn from_terms(
        variant: Variant,
        base: Option<Base>,
        sequence: Option<SeqRef>,
        terms: Vec<Term>,
        status: Status,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match variant {
            Variant::Gcf => {
                if sequence.is_none() {
                    return bad("gcf expansion needs a term sequence".into());
                }
                if terms.iter().any(|t| t.digits().is_some()) {
                    return bad("gcf terms are indices".into());
                }
            }
            v => {
                let Some(b) = base else {
                    return bad("missing base".into());
                };
                for t in &terms {
                    let Some((c, _)) = t.digits() else {
                        return bad("expected c*b^a terms".into());
                    };
                    let ok = if v == Variant::TypeI {
                        c == 1
                    } else {
                        (1..b.get()).contains(&c)
                    };
                    if !ok {
                        return Err(Error::InvalidDigit {
                            digit: c,
                            max: b.get() - 1,
                        });
                    }
                }
            }
        }
        Ok(Expansion {
            variant,
            base,
            sequence,
            terms,
            status,
            guard: None,
        })
    }

    /// Denominator terms `D_n` and following numerators `N_n`, so that
    /// `x = D_0 + N_0/(D_1 + N_1/(D_2 + ...))`.
    pub fn coefficients(&self) -> (Vec<BigUint>, Vec<BigUint>) {
        let mut ds = Vec::with_capacity(self.terms.len());
        let mut ns = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let (d, n) = match (*t, self.base, &self.sequence) {
                (Term::Power { c, a }, Some(b), _) => {
                    let pw = b.pow(a);
                    match self.variant {
                        Variant::TypeI => (pw.clone(), pw * (b.get() - 1)),
                        Variant::TypeII => {
                            let v = pw * c;
                            (v.clone(), v)
                        }
                        _ => (&pw * c, pw),
                    }
                }
                (Term::Index { j }, _, Some(seq)) => {
                    let cj = seq.term(j);
                    let next = seq.term(j + 1);
                    let gap = next - &cj;
                    (cj, gap)
                }
                _ => unreachable!("term kind checked at construction"),
            };
            ds.push(d);
            ns.push(n);
        }
        (ds, ns)
    }

    /// Exact value of the finite expansion.
    pub fn value(&self) -> Result<BigRational> {
        Ok(convergents(self)?.last().expect("non-empty").value())
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "variant": self.variant,
            "terms": self.terms,
            "status": self.status,
        });
        if let Some(b) = self.base {
            v["base"] = json!(b.get());
        }
        if let Some(s) = &self.sequence {
            v["sequence"] = json!(s.name());
        }
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let variant: Variant =
            serde_json::from_value(v["variant"].clone()).map_err(|_| bad("variant"))?;
        let status: Status =
            serde_json::from_value(v["status"].clone()).map_err(|_| bad("status"))?;
        let terms: Vec<Term> =
            serde_json::from_value(v["terms"].clone()).map_err(|_| bad("terms"))?;
        let base = match v.get("base") {
            Some(b) => Some(serde_json::from_value::<Base>(b.clone()).map_err(|_| bad("base"))?),
            None => None,
        };
        let sequence = match v.get("sequence").and_then(Value::as_str) {
            Some(name) => Some(sequence_by_name(name)?),
            None => None,
        };
        Expansion::from_terms(variant, base, sequence, terms, status)
    }
}

/// Compact text form `[c0*b^a0; c1*b^a1, ...]`, or `[#j0; #j1, ...]` for a
/// gcf.
impl fmt::Display for Expansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.base.map(|b| b.get()).unwrap_or(0);
        let items: Vec<String> = self
            .terms
            .iter()
            .map(|t| match *t {
                Term::Power { c, a } => format!("{c}*{b}^{a}"),
                Term::Index { j } => format!("#{j}"),
            })
            .collect();
        match items.split_first() {
            None => write!(f, "[]"),
            Some((first, [])) => write!(f, "[{first}]"),
            Some((first, rest)) => write!(f, "[{first}; {}]", rest.join(", ")),
        }
    }
}

/// Parses the text form produced by `Display`, returning the base (if
/// any) and the terms.
pub fn parse_terms(s: &str) -> Result<(Option<Base>, Vec<Term>)> {
    let bad = || Error::Parse(s.to_string());
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(bad)?;
    if inner.trim().is_empty() {
        return Ok((None, Vec::new()));
    }
    let mut base = None;
    let mut terms = Vec::new();
    for item in inner.split([';', ',']) {
        let item = item.trim();
        if let Some(j) = item.strip_prefix('#') {
            terms.push(Term::index(j.parse().map_err(|_| bad())?));
            continue;
        }
        let (c, rest) = item.split_once('*').ok_or_else(bad)?;
        let (bs, a) = rest.split_once('^').ok_or_else(bad)?;
        let b = Base::new(bs.parse().map_err(|_| bad())?)?;
        if base.is_some_and(|x| x != b) {
            return Err(bad());
        }
        base = Some(b);
        terms.push(Term::power(
            c.parse().map_err(|_| bad())?,
            a.parse().map_err(|_| bad())?,
        ));
    }
    Ok((base, terms))
}

/// `(p_n, q_n)` for every prefix, from
/// `p_n = D_n p_{n-1} + N_{n-1} p_{n-2}` seeded with `p_{-1} = 1, q_{-1} = 0`.
pub fn convergents(e: &Expansion) -> Result<Vec<ConvergentPair>> {
    if e.terms.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    let (ds, ns) = e.coefficients();
    let mut out = Vec::with_capacity(ds.len());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let (mut p0, mut q0) = (BigInt::from(ds[0].clone()), BigInt::one());
    out.push(ConvergentPair {
        p: p0.clone(),
        q: q0.clone(),
    });
    for n in 1..ds.len() {
        let d = BigInt::from(ds[n].clone());
        let num = BigInt::from(ns[n - 1].clone());
        let p = &d * &p0 + &num * &p1;
        let q = &d * &q0 + &num * &q1;
        p1 = std::mem::replace(&mut p0, p);
        q1 = std::mem::replace(&mut q0, q);
        out.push(ConvergentPair {
            p: p0.clone(),
            q: q0.clone(),
        });
    }
    Ok(out)
}

/// Recovers `x` from the remainder `r_k`:
/// `(p_{k-1} r_k + p_{k-2} N_{k-1}) / (q_{k-1} r_k + q_{k-2} N_{k-1})`.
pub fn reconstruct_from_remainder(
    e: &Expansion,
    k: usize,
    r_k: &BigRational,
) -> Result<BigRational> {
    let len = e.terms.len();
    if k == 0 || k > len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    if r_k < &BigRational::one() {
        return Err(Error::Precondition("remainder must be at least 1".into()));
    }
    let cs = convergents(e)?;
    let (_, ns) = e.coefficients();
    let (pa, qa) = (&cs[k - 1].p, &cs[k - 1].q);
    let (pb, qb) = if k >= 2 {
        (cs[k - 2].p.clone(), cs[k - 2].q.clone())
    } else {
        (BigInt::one(), BigInt::zero())
    };
    let num = BigRational::from_integer(BigInt::from(ns[k - 1].clone()));
    let lift = |x: &BigInt| BigRational::from_integer(x.clone());
    let top = lift(pa) * r_k + lift(&pb) * &num;
    let bot = lift(qa) * r_k + lift(&qb) * &num;
    Ok(top / bot)
}

/// The remainders `r_1, ..., r_n` of a finite expansion with
/// `r_n = D_n`: `r_k = D_k + N_k / r_{k+1}`.
pub fn remainders(e: &Expansion) -> Result<Vec<BigRational>> {
    if e.terms.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    let (ds, ns) = e.coefficients();
    let lift = |x: &BigUint| BigRational::from_integer(BigInt::from(x.clone()));
    let n = ds.len();
    let mut out = vec![BigRational::zero(); n];
    out[n - 1] = lift(&ds[n - 1]);
    for k in (0..n - 1).rev() {
        out[k] = lift(&ds[k]) + lift(&ns[k]) / &out[k + 1];
    }
    out.remove(0);
    Ok(out)
}

/// Equivalent continued fraction with every partial denominator equal to 1:
/// `x = leading + partials[0]/(1 + partials[1]/(1 + ...))`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCf {
    pub leading: BigRational,
    pub partials: Vec<BigRational>,
}

impl ReducedCf {
    /// `(numerator, denominator)` pairs, denominators all 1.
    pub fn pairs(&self) -> Vec<(BigRational, BigRational)> {
        self.partials
            .iter()
            .map(|p| (p.clone(), BigRational::one()))
            .collect()
    }

    /// Value truncated after `n` partial quotients.
    pub fn value_at_depth(&self, n: usize) -> BigRational {
        let n = n.min(self.partials.len());
        let mut tail = BigRational::zero();
        for p in self.partials[..n].iter().rev() {
            tail = p / (BigRational::one() + tail);
        }
        // the innermost denominator is 1 + 0
        &self.leading + tail
    }
}

/// Applies `d_0 = 1, d_n = 1/D_n`, giving `beta'_n = d_n d_{n-1} N_{n-1}`.
pub fn denominator_reduced(e: &Expansion) -> Result<ReducedCf> {
    if e.terms.is_empty() {
        return Err(Error::EmptyExpansion);
    }
    let (ds, ns) = e.coefficients();
    let lift = |x: &BigUint| BigRational::from_integer(BigInt::from(x.clone()));
    let partials = (1..ds.len())
        .map(|n| {
            let prev = if n == 1 {
                BigRational::one()
            } else {
                lift(&ds[n - 1])
            };
            lift(&ns[n - 1]) / (lift(&ds[n]) * prev)
        })
        .collect();
    Ok(ReducedCf {
        leading: lift(&ds[0]),
        partials,
    })
}

pub type Matrix2 = [[BigInt; 2]; 2];

/// `prod_{j=0}^{n} [[D_j, 1], [N_{j-1}, 0]]` with `N_{-1} = 1`, which equals
/// `[[p_n, p_{n-1}], [q_n, q_{n-1}]]`.
pub fn pq_matrix(e: &Expansion, n: usize) -> Result<Matrix2> {
    if n >= e.terms.len() {
        return Err(Error::IndexOutOfRange {
            index: n,
            len: e.terms.len(),
        });
    }
    let (ds, ns) = e.coefficients();
    let mut m: Matrix2 = [
        [BigInt::one(), BigInt::zero()],
        [BigInt::zero(), BigInt::one()],
    ];
    for j in 0..=n {
        let nprev = if j == 0 {
            BigInt::one()
        } else {
            BigInt::from(ns[j - 1].clone())
        };
        let f: Matrix2 = [
            [BigInt::from(ds[j].clone()), BigInt::one()],
            [nprev, BigInt::zero()],
        ];
        m = mat_mul(&m, &f);
    }
    Ok(m)
}

fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Common-factor-free form of a convergent, for comparisons.
pub fn reduced(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    let g = p.gcd(q);
    (p / &g, q / &g)
}
