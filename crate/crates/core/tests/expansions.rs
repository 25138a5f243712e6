use std::sync::Arc;

use clogkit::expand::{
    convergents, denominator_reduced, expand_gcf, expand_type1, expand_type2, expand_type3,
    reconstruct_from_remainder, remainders, sequence_by_name, Expansion, Input, Powers, Status,
    Term, Variant, HARD_MAX_TERMS,
};
use clogkit::numtypes::{floor_log_base, leading_digit, parse_rational, rational_from_decimal};
use clogkit::{Base, BigRational, Error};
use num_bigint::BigInt;

fn b(n: u64) -> Base {
    Base::new(n).unwrap()
}

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn pw(c: u64, a: u64) -> Term {
    Term::power(c, a)
}

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap().trim().to_string()
}

#[test]
fn decimal_literals_are_exact() {
    assert_eq!(rational_from_decimal("1.5", None).unwrap(), r(3, 2));
    assert_eq!(rational_from_decimal("2", None).unwrap(), r(2, 1));
    assert_eq!(rational_from_decimal("0.333", None).unwrap(), r(333, 1000));
    assert_eq!(rational_from_decimal("-12.5", Some(-1)).unwrap(), r(-5, 4));
    assert!(matches!(
        rational_from_decimal("1.2.3", None),
        Err(Error::Parse(_))
    ));
    assert_eq!(parse_rational("14/6").unwrap(), r(7, 3));
}

#[test]
fn digit_extraction() {
    assert_eq!(floor_log_base(&r(8, 1), b(2)).unwrap(), 3);
    assert_eq!(floor_log_base(&r(7, 3), b(2)).unwrap(), 1);
    assert_eq!(floor_log_base(&r(1, 1), b(5)).unwrap(), 0);
    assert_eq!(floor_log_base(&r(1, 8), b(2)).unwrap(), -3);
    assert!(floor_log_base(&r(0, 1), b(2)).is_err());
    assert_eq!(leading_digit(&r(7, 3), b(2), 1).unwrap(), 1);
    assert_eq!(leading_digit(&r(7, 2), b(4), 0).unwrap(), 3);
    assert_eq!(leading_digit(&r(343, 1), b(7), 3).unwrap(), 1);
    assert!(leading_digit(&r(7, 2), b(4), 1).is_err());
}

#[test]
fn type1_examples() {
    let e = expand_type1(r(2, 1), b(3), 50).unwrap();
    assert_eq!(e.terms, vec![pw(1, 0); 50]);
    assert_eq!(e.status, Status::TruncatedAtLimit);
    let e = expand_type1(r(4, 1), b(2), 50).unwrap();
    assert_eq!(
        (e.terms.clone(), e.status),
        (vec![pw(1, 2)], Status::Terminated)
    );
    let e = expand_type1(r(3, 2), b(2), 50).unwrap();
    assert_eq!(
        (e.terms.clone(), e.status),
        (vec![pw(1, 0), pw(1, 1)], Status::Terminated)
    );
    assert!(matches!(
        expand_type1(r(1, 2), b(2), 50),
        Err(Error::BelowOne(_))
    ));
}

#[test]
fn type2_examples() {
    let e = expand_type2(r(7, 2), b(4), 50).unwrap();
    assert_eq!(e.terms, vec![pw(3, 0), pw(1, 1), pw(2, 0)]);
    assert_eq!(e.status, Status::Terminated);
    for k in 0..6 {
        let x = BigRational::from_integer(BigInt::from(b(5).pow(k)));
        let e = expand_type2(x, b(5), 50).unwrap();
        assert_eq!(
            (e.terms.clone(), e.status),
            (vec![pw(1, k)], Status::Terminated)
        );
    }
    let e = expand_type2(r(2, 1), b(3), 50).unwrap();
    assert_eq!(e.terms, vec![pw(2, 0)]);
}

#[test]
fn type3_examples() {
    assert_eq!(
        expand_type3(r(2, 1), b(2), 50).unwrap().terms,
        vec![pw(1, 1)]
    );
    assert_eq!(
        expand_type3(r(2, 1), b(3), 50).unwrap().terms,
        vec![pw(2, 0)]
    );
    let e = expand_type3(r(7, 3), b(2), 50).unwrap();
    assert_eq!(e.status, Status::Terminated);
    assert_eq!(e.value().unwrap(), r(7, 3));
    // y0 = 7/3, a0 = 1; y1 = 2/(1/3) = 6, a1 = 2; y2 = 4/2 = 2
    assert_eq!(e.terms, vec![pw(1, 1), pw(1, 2), pw(1, 1)]);
}

#[test]
fn gcf_examples() {
    let nat = sequence_by_name("naturals").unwrap();
    let e = expand_gcf(r(3, 2), nat.clone(), 50).unwrap();
    assert_eq!(
        (e.terms.clone(), e.status),
        (vec![Term::index(0), Term::index(1)], Status::Terminated)
    );
    // simple continued fraction of 415/93 = [4; 2, 6, 7]
    let e = expand_gcf(r(415, 93), nat, 50).unwrap();
    let vals: Vec<u64> = e.terms.iter().map(|t| t.gcf_index().unwrap() + 1).collect();
    assert_eq!(vals, vec![4, 2, 6, 7]);

    let pow2: Arc<Powers> = Arc::new(Powers(b(2)));
    for (p, q) in [(3, 2), (7, 3), (1001, 999), (5, 1)] {
        let g = expand_gcf(r(p, q), pow2.clone(), 64).unwrap();
        let t = expand_type1(r(p, q), b(2), 64).unwrap();
        let js: Vec<u64> = g.terms.iter().map(|t| t.gcf_index().unwrap()).collect();
        let ks: Vec<u64> = t.terms.iter().map(|t| t.digits().unwrap().1).collect();
        assert_eq!((js, g.status), (ks, t.status));
    }
    let e = expand_gcf(r(2, 1), sequence_by_name("powers:3").unwrap(), 50).unwrap();
    assert_eq!(
        (e.terms.clone(), e.status),
        (vec![Term::index(0); 50], Status::TruncatedAtLimit)
    );
}

#[test]
fn convergent_examples() {
    let e = Expansion::from_terms(
        Variant::TypeIII,
        Some(b(2)),
        None,
        vec![pw(1, 0), pw(1, 1)],
        Status::Terminated,
    )
    .unwrap();
    let cs = convergents(&e).unwrap();
    assert_eq!(
        (cs[0].p.clone(), cs[0].q.clone()),
        (BigInt::from(1), BigInt::from(1))
    );
    assert_eq!(
        (cs[1].p.clone(), cs[1].q.clone()),
        (BigInt::from(3), BigInt::from(2))
    );
    let single = Expansion::from_terms(
        Variant::TypeIII,
        Some(b(5)),
        None,
        vec![pw(3, 2)],
        Status::Terminated,
    )
    .unwrap();
    assert_eq!(convergents(&single).unwrap()[0].p, BigInt::from(75));
    let empty = Expansion::from_terms(
        Variant::TypeIII,
        Some(b(5)),
        None,
        vec![],
        Status::Terminated,
    )
    .unwrap();
    assert!(matches!(convergents(&empty), Err(Error::EmptyExpansion)));
    assert!(Expansion::from_terms(
        Variant::TypeIII,
        Some(b(3)),
        None,
        vec![pw(3, 0)],
        Status::Terminated
    )
    .is_err());
}

#[test]
fn remainder_examples() {
    let x = r(7, 3);
    let e = expand_type3(x.clone(), b(2), 50).unwrap();
    let rs = remainders(&e).unwrap();
    assert_eq!(reconstruct_from_remainder(&e, 1, &rs[0]).unwrap(), x);
    let n = e.terms.len() - 1;
    assert_eq!(rs[n - 1], r(2, 1));
    for k in 1..=n {
        assert_eq!(reconstruct_from_remainder(&e, k, &rs[k - 1]).unwrap(), x);
    }
    assert!(matches!(
        reconstruct_from_remainder(&e, 0, &rs[0]),
        Err(Error::IndexOutOfRange { .. })
    ));
    assert!(reconstruct_from_remainder(&e, 1, &r(1, 2)).is_err());
}

#[test]
fn reduced_form_examples() {
    let one = Expansion::from_terms(
        Variant::TypeIII,
        Some(b(3)),
        None,
        vec![pw(1, 0)],
        Status::Terminated,
    )
    .unwrap();
    let red = denominator_reduced(&one).unwrap();
    assert_eq!((red.leading.clone(), red.partials.len()), (r(1, 1), 0));
    // second partial numerator c_1^-1 b^{a_0 - a_1}
    let two = Expansion::from_terms(
        Variant::TypeIII,
        Some(b(3)),
        None,
        vec![pw(2, 3), pw(2, 1)],
        Status::Terminated,
    )
    .unwrap();
    let red = denominator_reduced(&two).unwrap();
    assert_eq!(red.partials, vec![r(9, 2)]);
    assert_eq!(red.value_at_depth(1), two.value().unwrap());
    let t1 = expand_type1(r(3, 2), b(2), 10).unwrap();
    let red = denominator_reduced(&t1).unwrap();
    assert_eq!(red.partials, vec![r(1, 2)]);
    assert_eq!(red.value_at_depth(1), r(3, 2));
    assert_eq!(red.pairs(), vec![(r(1, 2), r(1, 1))]);
}

#[test]
fn truncated_inputs_exhaust_their_digits() {
    let digits = fixture("sqrt2_50000.txt");
    assert!(digits.starts_with("1.41421356237309504880"));
    let e = expand_type3(
        Input::decimal(&digits[..202]).unwrap(),
        b(2),
        HARD_MAX_TERMS,
    )
    .unwrap();
    assert_eq!(e.status, Status::PrecisionExhausted);
    let g = e.guard.unwrap();
    assert!(g.consumed_bits <= g.budget_bits());
    // the terms that were emitted agree with those of a longer approximation
    let longer = expand_type3(
        Input::decimal(&digits[..2002]).unwrap(),
        b(2),
        e.terms.len(),
    )
    .unwrap();
    assert_eq!(longer.terms, e.terms);

    let e_digits = fixture("e_50000.txt");
    assert!(e_digits.starts_with("2.71828182845904523536"));
    let nat = sequence_by_name("naturals").unwrap();
    let cf = expand_gcf(Input::decimal(&e_digits[..402]).unwrap(), nat, 300).unwrap();
    assert_eq!(cf.status, Status::PrecisionExhausted);
    // e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    let vals: Vec<u64> = cf
        .terms
        .iter()
        .take(60)
        .map(|t| t.gcf_index().unwrap() + 1)
        .collect();
    for (i, v) in vals.iter().enumerate().skip(1) {
        let want = if i % 3 == 2 {
            2 * (i as u64 + 1) / 3
        } else {
            1
        };
        assert_eq!(*v, want, "partial quotient {i}");
    }
}
