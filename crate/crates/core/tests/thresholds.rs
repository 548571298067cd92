use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use qfs_core::fedder::HeightValue;
use qfs_core::thresholds::*;

fn q(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Digit expansion truncated after `len` places, bracketing the true value:
/// `sum ≤ value ≤ sum + p^{-len}`.
fn digit_bracket(p: u32, seq: &DigitSequence, len: usize) -> (Rational, Rational) {
    let mut sum = Rational::zero();
    let mut scale = Rational::one();
    let inv = q(1, p as i64);
    for a in seq.digits(p, len) {
        scale *= &inv;
        sum += &scale * BigInt::from(a);
    }
    let hi = &sum + &scale;
    (sum, hi)
}

fn closed_cy(p: u32, n: u32) -> Rational {
    // 1 - (p + ... + p^{n-1}) / (p^n - 1), summed term by term.
    let pn = BigInt::from(p).pow(n);
    let mut s = BigInt::zero();
    for k in 1..n {
        s += BigInt::from(p).pow(k);
    }
    Rational::one() - BigRational::new(s, pn - 1)
}

fn closed_ffinfty(p: u32, n: u32) -> Rational {
    let mut s = Rational::zero();
    for k in 1..n {
        s += BigRational::new(BigInt::one(), BigInt::from(p).pow(k));
    }
    Rational::one() - s
}

#[test]
fn i_n_examples() {
    assert_eq!(i_n(2, 1), q(1, 2));
    assert_eq!(i_n(2, 3), q(7, 8));
    assert_eq!(i_n(3, 2), q(4, 9));
    assert_eq!(i_n(7, 0), q(0, 1));
}

#[test]
fn bounds_examples() {
    for p in [2, 3, 97] {
        assert_eq!(
            ppt_bounds(p, 1),
            Interval {
                lo: q(1, 1),
                hi: q(1, 1)
            }
        );
    }
    assert_eq!(
        ppt_bounds(2, 2),
        Interval {
            lo: q(1, 3),
            hi: q(1, 2)
        }
    );
    assert_eq!(
        ppt_bounds(2, 4),
        Interval {
            lo: q(1, 15),
            hi: q(1, 8)
        }
    );
}

#[test]
fn exact_examples() {
    assert_eq!(ppt_exact_ffinfty(2, 4), q(1, 8));
    assert_eq!(ppt_exact_ffinfty(3, 3), q(5, 9));
    assert_eq!(ppt_exact_ffinfty(5, 2), q(4, 5));
    assert_eq!(ppt_exact_cy(2, 2), q(1, 3));
    assert_eq!(ppt_exact_cy(5, 2), q(19, 24));
    assert_eq!(ppt_exact_cy(11, 1), q(1, 1));
}

#[test]
fn digit_examples() {
    for p in [2, 3, 5] {
        assert_eq!(
            ppt_from_digits(p, &DigitSequence::constant(1).unwrap()),
            q(1, 1)
        );
    }
    assert!(DigitSequence::new(vec![1], vec![]).is_err());
    assert!(DigitSequence::new(vec![0], vec![1]).is_err());
}

/// Digit formula against both closed forms and against direct truncated summation.
#[test]
fn digit_formula_agrees_with_closed_forms() {
    for p in [2, 3, 5, 7] {
        for n in 1..=6 {
            let cy = DigitSequence::constant(n).unwrap();
            let ff = DigitSequence::new(vec![n], vec![1]).unwrap();
            assert_eq!(ppt_from_digits(p, &cy), closed_cy(p, n), "p={p} n={n}");
            assert_eq!(ppt_from_digits(p, &ff), closed_ffinfty(p, n), "p={p} n={n}");
            assert_eq!(ppt_exact_cy(p, n), closed_cy(p, n));
            assert_eq!(ppt_exact_ffinfty(p, n), closed_ffinfty(p, n));
            for seq in [&cy, &ff] {
                let (lo, hi) = digit_bracket(p, seq, 80);
                let v = ppt_from_digits(p, seq);
                assert!(lo <= v && v <= hi);
            }
            let b = ppt_bounds(p, n);
            assert_eq!(b.lo, closed_cy(p, n));
            assert_eq!(b.hi, closed_ffinfty(p, n));
        }
    }
}

#[test]
fn consecutive_intervals_are_disjoint() {
    for p in (2u32..=97).filter(|&p| (2..p).all(|d| p % d != 0)) {
        let ceiling = non_qfs_ceiling(p);
        for n in 1..=30 {
            let (a, b) = (ppt_bounds(p, n), ppt_bounds(p, n + 1));
            assert!(a.lo > b.hi, "p={p} n={n}");
            assert!(a.lo <= a.hi);
            assert!(b.hi < a.hi && b.lo < a.lo);
            assert!(b.lo > ceiling);
            assert!(a.contains(&ppt_exact_cy(p, n)) && a.contains(&ppt_exact_ffinfty(p, n)));
        }
    }
}

#[test]
fn report_dispatch() {
    let ci = Assertions {
        complete_intersection: true,
        ..Assertions::default()
    };
    let exact = |h, ff, a| {
        ppt_report(2, &HeightValue::Finite(h), ff, a, ci)
            .exact_value()
            .cloned()
    };
    assert_eq!(exact(2, Some(true), None), Some(q(1, 2)));
    assert_eq!(exact(3, Some(true), None), Some(q(1, 4)));
    assert_eq!(exact(2, Some(false), Some(0)), Some(q(1, 3)));
    let r = ppt_report(3, &HeightValue::Finite(2), Some(false), Some(-1), ci);
    assert_eq!(r.kind, PptKind::Interval(ppt_bounds(3, 2)));
    let r = ppt_report(5, &HeightValue::Infinite, None, None, ci);
    assert_eq!(r.kind, PptKind::UpperBoundOnly { bound: q(3, 4) });
    let r = ppt_report(
        5,
        &HeightValue::Inconclusive {
            max_reached: 3,
            reason: "x".into(),
        },
        None,
        None,
        ci,
    );
    assert_eq!(r.kind, PptKind::Unknown);
    let r = ppt_report(
        2,
        &HeightValue::Finite(2),
        Some(true),
        None,
        Assertions::default(),
    );
    assert_eq!(r.kind, PptKind::Unknown);
    assert_eq!(
        r.justification,
        Justification::CompleteIntersectionNotAsserted
    );
}

#[test]
fn rendering() {
    assert_eq!(render_fraction(&q(5, 9)), "5/9");
    assert_eq!(render_decimal(&q(5, 9), 12), "0.555555555556");
    assert_eq!(render_decimal(&q(1, 8), 12), "0.125");
    let r = ppt_report(
        2,
        &HeightValue::Finite(4),
        Some(true),
        None,
        Assertions {
            complete_intersection: true,
            ..Default::default()
        },
    );
    let text = serde_json::to_string(&r).unwrap();
    assert_eq!(serde_json::from_str::<PptResult>(&text).unwrap(), r);
}

fn digit_seq() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (
        prop::collection::vec(1u32..=5, 0..=4),
        prop::collection::vec(1u32..=5, 1..=3),
    )
}

proptest! {
    #[test]
    fn smaller_digit_sources_give_larger_thresholds(p in prop_oneof![Just(2u32), Just(3), Just(5), Just(7)], (pre, per) in digit_seq(), pick in any::<prop::sample::Index>()) {
        let base = DigitSequence::new(pre.clone(), per.clone()).unwrap();
        let total = pre.len() + per.len();
        let i = pick.index(total);
        let (mut pre2, mut per2) = (pre.clone(), per.clone());
        let slot = if i < pre.len() { &mut pre2[i] } else { &mut per2[i - pre.len()] };
        prop_assume!(*slot > 1);
        *slot -= 1;
        let smaller = DigitSequence::new(pre2, per2).unwrap();
        prop_assert!(ppt_from_digits(p, &smaller) >= ppt_from_digits(p, &base));
    }

    #[test]
    fn digit_formula_matches_truncated_sum(p in prop_oneof![Just(2u32), Just(3), Just(5), Just(7)], (pre, per) in digit_seq()) {
        let seq = DigitSequence::new(pre, per).unwrap();
        let v = ppt_from_digits(p, &seq);
        let (lo, hi) = digit_bracket(p, &seq, 90);
        prop_assert!(lo <= v && v <= hi);
        prop_assert!(v > non_qfs_ceiling(p) && v <= q(1, 1));
    }
}
