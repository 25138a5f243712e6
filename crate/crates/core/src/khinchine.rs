//! Logarithmic Khinchine constants: closed forms for types I and III, the
//! iterated estimate for type II, the classical constant, and empirical
//! term statistics.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::distribution::{dn_mass, iterate_m, m_limit_type3};
use crate::error::{Error, Result};
use crate::expand::{Expansion, Term, Variant};
use crate::numtypes::Base;
use crate::output::format_sig;
use crate::precision::{CompensatedSum, Real};

/// Nine-digit published values for `b = 2..=10`.
pub const REFERENCE_TYPE1: [f64; 9] = [
    2.656305058,
    2.598065150,
    2.556003239,
    2.524285360,
    2.499311827,
    2.478977440,
    2.461986788,
    2.447498976,
    2.434942582,
];
pub const REFERENCE_TYPE2: [f64; 9] = [
    2.656305048,
    3.415974174,
    4.064209949,
    4.636437895,
    5.152343739,
    5.624290253,
    6.060673548,
    6.467518102,
    6.849326402,
];
pub const REFERENCE_TYPE3: [f64; 9] = [
    2.656305058,
    2.666666667,
    2.671738848,
    2.674705520,
    2.676638451,
    2.677992355,
    2.678991102,
    2.679757051,
    2.680362475,
];
/// The classical Khinchine constant to ten digits.
pub const KHINCHINE: f64 = 2.6854520010;

/// Default grid for the type II estimate.
pub const KL2_GRID: usize = 1001;
/// Series index above which terms are summed in compensated `f64`.
const EXACT_TERMS: u64 = 2048;

#[derive(Debug, Clone)]
pub struct KhinchineValue {
    pub value: Real,
    /// `value = b^exponent_a` for the base-`b` constants; natural log of
    /// `value` for the classical constant.
    pub exponent_a: Real,
    /// Bound on the error from truncating an infinite sum or product; 0 for
    /// closed forms.
    pub tail_bound: f64,
}

impl KhinchineValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn format(&self, digits: usize) -> String {
        format_sig(&self.value.to_rational(), digits)
    }
}

fn ln_u(v: u64) -> Real {
    Real::from_u64(v).ln()
}

/// `A = log b / log(b^2/(2b-1)) - 1`, value `b^A`.
pub fn kl_type1(b: Base) -> KhinchineValue {
    let bv = b.get();
    let ln_b = ln_u(bv);
    let ratio = Real::from_u64(bv) * Real::from_u64(bv) / Real::from_u64(2 * bv - 1);
    let a = &ln_b / &ratio.ln() - Real::one();
    KhinchineValue {
        value: (&a * &ln_b).exp(),
        exponent_a: a,
        tail_bound: 0.0,
    }
}

/// `sum_{l=2}^{n} log(1 - 1/l) log(1 + 1/l)`, exact for small `l` and
/// compensated `f64` beyond.
fn log_product_series(n: u64) -> Real {
    let mut s = Real::zero();
    for l in 2..=n.min(EXACT_TERMS) {
        let lr = Real::from_u64(l);
        let lo = (Real::from_u64(l - 1) / &lr).ln();
        let hi = (Real::from_u64(l + 1) / &lr).ln();
        s = s + lo * hi;
    }
    if n > EXACT_TERMS {
        let mut c = CompensatedSum::default();
        for l in (EXACT_TERMS + 1..=n).rev() {
            let inv = 1.0 / l as f64;
            c.add((-inv).ln_1p() * inv.ln_1p());
        }
        s = s + Real::from_f64(c.value());
    }
    s
}

/// `A_b = sum_{l=2}^{b} log(1-1/l) log(1+1/l) / (log b log((b+1)/(2b)))`,
/// value `b^{A_b}`.
pub fn kl_type3(b: Base) -> KhinchineValue {
    let bv = b.get();
    let s = log_product_series(bv);
    let ln_b = ln_u(bv);
    let scale = (Real::from_u64(bv + 1) / Real::from_u64(2 * bv)).ln();
    let a = &s / &(&ln_b * &scale);
    KhinchineValue {
        value: (&s / &scale).exp(),
        exponent_a: a,
        tail_bound: 0.0,
    }
}

/// `prod_{k <= k_cap} prod_l (l b^k)^{mass(k,l)}` with masses from the
/// type II recurrence iterated on a `grid_points` grid (its sums also
/// truncated at `k_cap`).
pub fn kl_type2_estimate(
    b: Base,
    iterations: usize,
    k_cap: u64,
    grid_points: usize,
) -> Result<KhinchineValue> {
    if iterations < 1 {
        return Err(Error::InvalidParameter(
            "iterations must be at least 1".into(),
        ));
    }
    let m = iterate_m(Variant::TypeII, b, grid_points, iterations, k_cap)?;
    let ln_b = (b.get() as f64).ln();
    let mut s = CompensatedSum::default();
    for k in 0..=k_cap {
        for l in 1..b.get() {
            let w = (l as f64).ln() + k as f64 * ln_b;
            s.add(dn_mass(Variant::TypeII, b, &m, k, l)? * w);
        }
    }
    let log_value = s.value();
    // omitted terms: mass(k, .) <= 2 b^-k in total, weight <= (k+1) log b
    let bf = b.get() as f64;
    let mut tail = 0.0;
    for k in k_cap + 1..k_cap + 200 {
        tail += 2.0 * bf.powi(-(k as i32)) * (k + 1) as f64 * ln_b;
    }
    let value = Real::from_f64(log_value).exp();
    let tail_bound = value.to_f64() * tail.exp_m1();
    Ok(KhinchineValue {
        exponent_a: Real::from_f64(log_value / ln_b),
        value,
        tail_bound,
    })
}

/// `K = exp(-(1/log 2) sum_{l=2}^{l_cap} log(1-1/l) log(1+1/l))`. Each
/// omitted summand is at most `1/(l(l-1))`, so the omitted part of `log K`
/// is at most `1/(l_cap log 2)`; truncation underestimates `K`.
pub fn classical_khinchine(l_cap: u64) -> Result<KhinchineValue> {
    if l_cap < 2 {
        return Err(Error::InvalidParameter("l_cap must be at least 2".into()));
    }
    let s = log_product_series(l_cap);
    let ln2 = ln_u(2);
    let a = -(s / ln2);
    let value = a.exp();
    let tail_bound = value.to_f64() * (1.0 / (l_cap as f64 * std::f64::consts::LN_2)).exp_m1();
    Ok(KhinchineValue {
        value,
        exponent_a: a,
        tail_bound,
    })
}

/// Series length used for the reference classical value.
pub const CLASSICAL_TERMS: u64 = 10_000_000;

/// `|kl_type3(b) - classical_khinchine(10^7)|`.
pub fn kl_limit_gap(b: Base) -> f64 {
    let k = classical_khinchine(CLASSICAL_TERMS).expect("valid cap");
    (kl_type3(b).value - k.value).abs().to_f64()
}

/// `|m_limit_type3(b, x) - log2 x|` for `1 < x < 2`.
pub fn mu_limit_gap(b: Base, x: f64) -> Result<f64> {
    if !(x > 1.0 && x < 2.0) {
        return Err(Error::OutOfDomain(x.to_string(), "1".into(), "2".into()));
    }
    Ok((m_limit_type3(b, x)? - (x - 1.0).ln_1p() / std::f64::consts::LN_2).abs())
}

/// Term counts and the accumulated `sum log_b(c b^a)` of an expansion.
#[derive(Debug, Clone)]
pub struct TermStats {
    pub b: Base,
    pub histogram: BTreeMap<(u64, u64), u64>,
    pub n_terms: u64,
    pub log_sum: Real,
}

/// Statistics over the terms after the first `skip_first`.
pub fn term_stats(e: &Expansion, skip_first: usize) -> Result<TermStats> {
    let b = match (e.variant, e.base) {
        (Variant::Gcf, _) | (_, None) => {
            return Err(Error::InvalidParameter(
                "term statistics need a continued logarithm".into(),
            ))
        }
        (_, Some(b)) => b,
    };
    if e.terms.len() <= skip_first {
        return Err(Error::TooFewTerms {
            have: e.terms.len(),
            need: skip_first,
        });
    }
    let mut histogram = BTreeMap::new();
    for t in &e.terms[skip_first..] {
        if let Term::Power { c, a } = *t {
            *histogram.entry((a, c)).or_insert(0u64) += 1;
        }
    }
    let n_terms = (e.terms.len() - skip_first) as u64;
    let log_sum = log_sum_of(b, &histogram);
    Ok(TermStats {
        b,
        histogram,
        n_terms,
        log_sum,
    })
}

fn log_sum_of(b: Base, histogram: &BTreeMap<(u64, u64), u64>) -> Real {
    let mut exps: u64 = 0;
    let mut by_digit: BTreeMap<u64, u64> = BTreeMap::new();
    for (&(k, l), &n) in histogram {
        exps += k * n;
        *by_digit.entry(l).or_insert(0) += n;
    }
    let ln_b = ln_u(b.get());
    let mut s = Real::from_u64(exps);
    for (l, n) in by_digit {
        if l > 1 {
            s = s + Real::from_u64(n) * ln_u(l) / &ln_b;
        }
    }
    s
}

impl TermStats {
    /// `b^{log_sum / n_terms}`.
    pub fn geometric_mean(&self) -> Real {
        let e = &self.log_sum / &Real::from_u64(self.n_terms);
        (e * ln_u(self.b.get())).exp()
    }

    pub fn proportion(&self, k: u64, l: u64) -> f64 {
        *self.histogram.get(&(k, l)).unwrap_or(&0) as f64 / self.n_terms as f64
    }

    /// `sum P(k,l) (k + log_b l)`, which equals `log_sum / n_terms`.
    pub fn mean_log(&self) -> Real {
        let ln_b = ln_u(self.b.get());
        let n = Real::from_u64(self.n_terms);
        let mut s = Real::zero();
        for (&(k, l), &c) in &self.histogram {
            let w = Real::from_u64(k) + ln_u(l) / &ln_b;
            s = s + Real::from_u64(c) / &n * w;
        }
        s
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let hist: Vec<Value> = self
            .histogram
            .iter()
            .map(|(&(k, l), &count)| json!({"k": k, "l": l, "count": count}))
            .collect();
        json!({
            "n_terms": self.n_terms,
            "geometric_mean": format_sig(&self.geometric_mean().to_rational(), digits),
            "histogram": hist,
        })
    }
}
