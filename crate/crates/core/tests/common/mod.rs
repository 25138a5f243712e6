//! Property checks shared by the property tests and the acceptance runner.
//! Each check runs a deterministic proptest runner and reports the first
//! minimal failure as a string.

#![allow(dead_code)]

use clogkit::expand::{
    convergents, denominator_reduced, expand, expand_gcf, expand_type3, pq_matrix,
    reconstruct_from_remainder, remainders, sequence_by_name, Expansion, Status, Variant,
};
use clogkit::intervals::{
    cylinder_contains, cylinder_endpoints, cylinder_measure, rank_total, ratio_bounds, CylinderSpec,
};
use clogkit::numtypes::floor_log_base;
use clogkit::{Base, BigRational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 1000;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, check)
        .map_err(|e| e.to_string())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn lift<E: std::fmt::Display>(r: Result<Expansion, E>) -> Result<Expansion, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub fn rat(p: u64, q: u64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// `p/q > 1` with `p <= 2^bits`.
pub fn above_one(bits: u32) -> impl Strategy<Value = (u64, u64)> {
    let top = 1u64 << bits;
    (1..top).prop_flat_map(move |q| (q + 1..=top, Just(q)))
}

pub fn base() -> impl Strategy<Value = Base> {
    (2u64..=10).prop_map(|b| Base::new(b).unwrap())
}

fn terminated_to(e: &Expansion, x: &BigRational) -> Result<(), TestCaseError> {
    ensure(e.status == Status::Terminated, || {
        format!("{x} did not terminate: {e}")
    })?;
    let v = e
        .value()
        .map_err(|err| TestCaseError::fail(err.to_string()))?;
    ensure(&v == x, || format!("{x} expanded to {e} with value {v}"))
}

/// Expansion of a rational terminates and its last convergent is the input.
pub fn roundtrip(variant: Variant, fixed_base: Option<u64>) -> Result<(), String> {
    let bases = match fixed_base {
        Some(b) => Just(b).boxed(),
        None => (2u64..=10).boxed(),
    };
    run(CASES, (above_one(20), bases), |((p, q), b)| {
        let x = rat(p, q);
        let e = lift(expand(variant, &x, Base::new(b).unwrap(), 10_000))?;
        terminated_to(&e, &x)
    })
}

pub fn gcf_roundtrip(name: &str) -> Result<(), String> {
    let seq = sequence_by_name(name).map_err(|e| e.to_string())?;
    run(CASES / 5, above_one(12), |(p, q)| {
        let x = rat(p, q);
        let e = lift(expand_gcf(&x, seq.clone(), 10_000))?;
        terminated_to(&e, &x)
    })
}

fn type3(p: u64, q: u64, b: Base) -> Result<Expansion, TestCaseError> {
    lift(expand_type3(rat(p, q), b, 10_000))
}

/// `p_n q_{n-1} - q_n p_{n-1} = (-1)^{n-1} b^{a_0 + ... + a_{n-1}}` for every prefix.
pub fn determinant() -> Result<(), String> {
    run(CASES, (above_one(20), base()), |((p, q), b)| {
        let e = type3(p, q, b)?;
        let cs = convergents(&e).unwrap();
        let mut exps = 0u64;
        let (mut pp, mut qp) = (BigInt::one(), BigInt::zero());
        for (n, c) in cs.iter().enumerate() {
            let det = &c.p * &qp - &c.q * &pp;
            let mag = BigInt::from(b.pow(exps));
            let want = if n % 2 == 1 { mag } else { -mag };
            ensure(det == want, || {
                format!("n={n} det {det} want {want} in {e}")
            })?;
            exps += e.terms[n].digits().unwrap().1;
            pp = c.p.clone();
            qp = c.q.clone();
        }
        Ok(())
    })
}

/// `q_n >= 2^{(n-1)/2}` and `q_n >= b^{a_1 + ... + a_n}`.
pub fn qn_bounds() -> Result<(), String> {
    run(CASES, (above_one(20), base()), |((p, q), b)| {
        let e = type3(p, q, b)?;
        let cs = convergents(&e).unwrap();
        let mut exps = 0u64;
        for (n, c) in cs.iter().enumerate() {
            if n >= 1 {
                exps += e.terms[n].digits().unwrap().1;
            }
            // q_n^2 >= 2^{n-1}
            let sq = &c.q * &c.q;
            let two = if n == 0 {
                BigInt::zero()
            } else {
                BigInt::one() << (n - 1)
            };
            ensure(sq >= two, || format!("n={n} q={} in {e}", c.q))?;
            ensure(c.q >= BigInt::from(b.pow(exps)), || {
                format!("n={n} q={} below b^{exps}", c.q)
            })?;
        }
        Ok(())
    })
}

/// Matrix product reproduces the recurrence values.
pub fn matrix_form() -> Result<(), String> {
    run(CASES, (above_one(20), base()), |((p, q), b)| {
        let e = type3(p, q, b)?;
        let cs = convergents(&e).unwrap();
        for n in 0..cs.len() {
            let m = pq_matrix(&e, n).unwrap();
            let (pm, qm) = if n == 0 {
                (BigInt::one(), BigInt::zero())
            } else {
                (cs[n - 1].p.clone(), cs[n - 1].q.clone())
            };
            ensure(
                m[0][0] == cs[n].p && m[1][0] == cs[n].q && m[0][1] == pm && m[1][1] == qm,
                || format!("n={n} in {e}"),
            )?;
        }
        Ok(())
    })
}

/// Every remainder reconstructs the input through the Moebius relation.
pub fn remainder_theorem() -> Result<(), String> {
    run(CASES, (above_one(20), base()), |((p, q), b)| {
        let x = rat(p, q);
        let e = type3(p, q, b)?;
        let rs = remainders(&e).unwrap();
        for (i, r) in rs.iter().enumerate() {
            let k = i + 1;
            let y = reconstruct_from_remainder(&e, k, r).unwrap();
            ensure(y == x, || format!("k={k} gave {y} for {x}"))?;
        }
        Ok(())
    })
}

/// Convergents alternate around `x` and the error is at most the gap to the
/// next convergent.
pub fn straddling() -> Result<(), String> {
    run(CASES, (above_one(20), base()), |((p, q), b)| {
        let x = rat(p, q);
        let e = type3(p, q, b)?;
        let cs = convergents(&e).unwrap();
        for n in 0..cs.len().saturating_sub(1) {
            let (a, c) = (cs[n].value(), cs[n + 1].value());
            let side = if n % 2 == 0 { a <= x } else { a >= x };
            ensure(side, || format!("n={n} convergent on wrong side of {x}"))?;
            ensure((&x - &a).abs() <= (&c - &a).abs(), || {
                format!("n={n} error above gap for {x}")
            })?;
        }
        Ok(())
    })
}

/// The denominator-reduced form has the same value.
pub fn reduced_form() -> Result<(), String> {
    run(
        CASES,
        (above_one(20), base(), 0usize..3),
        |((p, q), b, v)| {
            let variant = [Variant::TypeI, Variant::TypeII, Variant::TypeIII][v];
            let x = rat(p, q);
            let e = lift(expand(variant, &x, b, 40))?;
            let want = e.value().unwrap();
            let r = denominator_reduced(&e).unwrap();
            let got = r.value_at_depth(r.partials.len());
            ensure(got == want, || format!("{e}: {got} vs {want}"))
        },
    )
}

/// Binary length at most `2 log2 p + 10` for `1 < p/q < 2^30`.
pub fn shallit() -> Result<(), String> {
    let two = Base::new(2).unwrap();
    run(CASES, above_one(30), |(p, q)| {
        let e = lift(expand_type3(rat(p, q), two, 10_000))?;
        let bound = 2.0 * (p as f64).log2() + 10.0;
        ensure(
            e.status == Status::Terminated && (e.terms.len() as f64) <= bound,
            || format!("{p}/{q}: {} terms, bound {bound}", e.terms.len()),
        )
    })
}

pub fn cylinder_strategy() -> impl Strategy<Value = CylinderSpec> {
    (
        2u64..=6,
        prop::collection::vec((0u64..6, 1u64..1000), 1..=4),
    )
        .prop_map(|(b, coords)| {
            let base = Base::new(b).unwrap();
            let ks = coords.iter().map(|c| c.0).collect();
            let ls = coords.iter().map(|c| c.1 % (b - 1) + 1).collect();
            CylinderSpec::new(base, ks, ls).unwrap()
        })
}

fn measure_of_parent(spec: &CylinderSpec) -> (BigRational, clogkit::intervals::Interval) {
    match spec.parent() {
        Some(p) => (
            cylinder_measure(&p).unwrap(),
            cylinder_endpoints(&p).unwrap(),
        ),
        None => (
            BigRational::one(),
            clogkit::intervals::Interval {
                lo: rat(1, 1),
                hi: rat(2, 1),
            },
        ),
    }
}

/// Children sit inside their parent, siblings do not overlap, the closed
/// measure equals the endpoint length, child/parent ratios respect the
/// bracket, and the midpoint has the cylinder's prefix.
pub fn cylinders() -> Result<(), String> {
    run(
        CASES,
        (cylinder_strategy(), 0u64..6, 1u64..1000),
        |(spec, k2, l2)| {
            let b = spec.b;
            let iv = cylinder_endpoints(&spec).unwrap();
            let mu = cylinder_measure(&spec).unwrap();
            ensure(iv.length() == mu, || {
                format!("{spec:?}: length {} measure {mu}", iv.length())
            })?;
            let (pm, piv) = measure_of_parent(&spec);
            ensure(piv.contains_interval(&iv), || {
                format!("{spec:?} not inside its parent")
            })?;
            let k = *spec.ks.last().unwrap();
            let l = *spec.ls.last().unwrap();
            let (lo, hi) = ratio_bounds(b, k, l);
            let ratio = &mu / &pm;
            ensure(lo <= ratio && ratio <= hi, || {
                format!("{spec:?}: ratio {ratio} outside [{lo}, {hi}]")
            })?;
            let mut sib = spec
                .parent()
                .map(|p| p.child(k2, l2 % (b.get() - 1) + 1))
                .unwrap_or_else(|| {
                    CylinderSpec::new(b, vec![k2], vec![l2 % (b.get() - 1) + 1]).unwrap()
                });
            if sib == spec {
                sib = match spec.parent() {
                    Some(p) => p.child(k + 1, l),
                    None => CylinderSpec::new(b, vec![k + 1], vec![l]).unwrap(),
                };
            }
            let siv = cylinder_endpoints(&sib).unwrap();
            ensure(siv.disjoint(&iv), || format!("{spec:?} overlaps {sib:?}"))?;
            let mid = (&iv.lo + &iv.hi) / BigRational::from_integer(2.into());
            ensure(cylinder_contains(&spec, &mid).unwrap(), || {
                format!("{spec:?} misses its midpoint {mid}")
            })
        },
    )
}

/// Rank-`n` cylinders with exponents `<= K` cover `[1, 2]` up to the tail bound.
pub fn rank_sum() -> Result<(), String> {
    run(CASES, (2u64..=4, 1usize..=2, 0u64..=4), |(b, n, k)| {
        let t = rank_total(Base::new(b).unwrap(), n, k).unwrap();
        let one = BigRational::one();
        ensure(t.total <= one && &one - &t.total <= t.tail_bound, || {
            format!("b={b} n={n} K={k}: total {} tail {}", t.total, t.tail_bound)
        })
    })
}

/// `b^a <= y < b^{a+1}` for `a = floor_log_base(y, b)`.
pub fn floor_log() -> Result<(), String> {
    run(
        CASES,
        (1u64..1 << 40, 1u64..1 << 40, base()),
        |(p, q, b)| {
            let y = rat(p, q);
            let a = floor_log_base(&y, b).unwrap();
            let pw = |e: i64| {
                let m = BigRational::from_integer(BigInt::from(b.pow(e.unsigned_abs())));
                if e >= 0 {
                    m
                } else {
                    m.recip()
                }
            };
            ensure(pw(a) <= y && y < pw(a + 1), || {
                format!("{y} base {b:?} gave {a}")
            })
        },
    )
}

/// JSON and text forms read back to the same expansion.
pub fn serialization() -> Result<(), String> {
    run(
        CASES,
        (above_one(20), base(), 0usize..3),
        |((p, q), b, v)| {
            let variant = [Variant::TypeI, Variant::TypeII, Variant::TypeIII][v];
            let e = lift(expand(variant, rat(p, q), b, 30))?;
            let text = e.to_json().to_string();
            let back = Expansion::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
            ensure(back == e, || format!("json round trip of {e}"))?;
            let (pb, terms) = clogkit::expand::parse_terms(&e.to_string()).unwrap();
            ensure(pb == Some(b) && terms == e.terms, || {
                format!("text round trip of {e}")
            })
        },
    )
}
