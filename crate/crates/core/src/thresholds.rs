//! Perfectoid pure thresholds `ppt(R; div(p))` of complete intersections,
//! exact over the rationals, from the quasi-F-splitting height and the
//! quasi-(F,F^∞) decision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::fedder::HeightValue;

pub type Rational = BigRational;

fn rat(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Rational {
    Rational::new(n.into(), d.into())
}

fn big_pow(p: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), e as usize)
}

/// `i_n = 1/p + ⋯ + 1/p^n = (p^n - 1) / (p^n (p - 1))`; `i_0 = 0`.
pub fn i_n(p: u32, n: u32) -> Rational {
    let pn = big_pow(p, n);
    rat(&pn - 1, pn * (p - 1))
}

/// `1 - (p + ⋯ + p^{n-1}) / (p^n - 1)`, the lower end of the height-n window.
fn lower_end(p: u32, n: u32) -> Rational {
    let pn = big_pow(p, n);
    // p + ⋯ + p^{n-1} = (p^n - p) / (p - 1)
    Rational::one() - rat(&pn - p, (&pn - 1) * (p - 1))
}

/// Closed interval `[lo, hi]` with `lo ≤ hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "rational_text")]
    pub lo: Rational,
    #[serde(with = "rational_text")]
    pub hi: Rational,
}

impl Interval {
    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }
}

/// Window of `ppt` values compatible with height `n` (`n ≥ 1`).
pub fn ppt_bounds(p: u32, n: u32) -> Interval {
    assert!(n >= 1, "heights start at 1");
    Interval {
        lo: lower_end(p, n),
        hi: Rational::one() - i_n(p, n - 1),
    }
}

/// `ppt` of a quasi-(F,F^∞)-split complete intersection of height `n`.
pub fn ppt_exact_ffinfty(p: u32, n: u32) -> Rational {
    assert!(n >= 1, "heights start at 1");
    Rational::one() - i_n(p, n - 1)
}

/// `ppt` of a graded complete intersection with `a = 0` and height `n`.
pub fn ppt_exact_cy(p: u32, n: u32) -> Rational {
    assert!(n >= 1, "heights start at 1");
    lower_end(p, n)
}

/// `(p - 2) / (p - 1)`: every quasi-F-split complete intersection lies above it.
pub fn non_qfs_ceiling(p: u32) -> Rational {
    rat(p - 2, p - 1)
}

/// An eventually periodic sequence `n_0, n_1, …`: the preperiod followed by
/// the period repeated forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSequence {
    pub preperiod: Vec<u32>,
    pub period: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DigitSequenceError {
    #[error("the period must be nonempty")]
    EmptyPeriod,
    #[error("entries must be at least 1")]
    ZeroEntry,
}

impl DigitSequence {
    pub fn new(preperiod: Vec<u32>, period: Vec<u32>) -> Result<Self, DigitSequenceError> {
        if period.is_empty() {
            return Err(DigitSequenceError::EmptyPeriod);
        }
        if preperiod.iter().chain(&period).any(|&n| n == 0) {
            return Err(DigitSequenceError::ZeroEntry);
        }
        Ok(Self { preperiod, period })
    }

    pub fn constant(n: u32) -> Result<Self, DigitSequenceError> {
        Self::new(Vec::new(), vec![n])
    }

    /// The digits `a_1..a_len` of the base-p expansion.
    pub fn digits(&self, p: u32, len: usize) -> Vec<u32> {
        let mut marks = vec![false; len + 1];
        let mut sum = 0usize;
        for &n in self.preperiod.iter().chain(self.period.iter().cycle()) {
            sum += n as usize;
            if sum > len {
                break;
            }
            marks[sum] = true;
        }
        (1..=len)
            .map(|m| if marks[m] { p - 1 } else { p - 2 })
            .collect()
    }
}

/// `Σ_{m≥1} a_m / p^m` with `a_m = p - 1` at the partial sums
/// `n_0 + ⋯ + n_r` and `p - 2` elsewhere.
///
/// Equals `(p-2)/(p-1) + Σ_r p^{-S_r}`; the tail over the period is a
/// geometric series.
pub fn ppt_from_digits(p: u32, seq: &DigitSequence) -> Rational {
    let inv_p_pow = |e: u32| rat(1, big_pow(p, e));
    let mut total = non_qfs_ceiling(p);
    let mut s = 0u32;
    for &n in &seq.preperiod {
        s += n;
        total += inv_p_pow(s);
    }
    let mut one_period = Rational::zero();
    let mut t = 0u32;
    for &n in &seq.period {
        t += n;
        one_period += inv_p_pow(t);
    }
    let ratio = Rational::one() - inv_p_pow(t);
    total + inv_p_pow(s) * one_period / ratio
}

/// User assertions that the criteria cannot verify themselves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertions {
    #[serde(default)]
    pub complete_intersection: bool,
    #[serde(default)]
    pub normal: bool,
    #[serde(default)]
    pub quasi_gorenstein: bool,
    #[serde(default)]
    pub sfr_punctured: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PptKind {
    Exact {
        #[serde(with = "rational_text")]
        value: Rational,
    },
    Interval(Interval),
    UpperBoundOnly {
        #[serde(with = "rational_text")]
        bound: Rational,
    },
    Unknown,
}

/// Which fact the value rests on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Justification {
    /// Quasi-(F,F^∞)-split of height n: `1 - i_{n-1}`.
    FfInfinitySplit,
    /// Graded complete intersection with `a = 0`: constant digit sequence.
    CalabiYauConstantSequence,
    /// Height n alone: the height-n window.
    HeightWindow,
    /// Not quasi-F-split: strictly below `(p-2)/(p-1)` when perfectoid pure.
    NotQuasiFSplit,
    /// Height computation gave up.
    HeightInconclusive,
    /// Exact statements need the complete-intersection assertion.
    CompleteIntersectionNotAsserted,
    /// Two exact rules gave different values; points at an inconsistent input.
    ConflictingRules,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PptResult {
    #[serde(flatten)]
    pub kind: PptKind,
    pub justification: Justification,
    pub note: String,
    pub assumptions: Assertions,
    pub a_invariant: Option<i64>,
}

impl PptResult {
    pub fn exact_value(&self) -> Option<&Rational> {
        match &self.kind {
            PptKind::Exact { value } => Some(value),
            _ => None,
        }
    }

    /// Fraction plus 12-significant-digit decimal, e.g. `1/8 (0.125)`.
    pub fn render(&self) -> String {
        let show = |r: &Rational| format!("{} ({})", render_fraction(r), render_decimal(r, 12));
        match &self.kind {
            PptKind::Exact { value } => show(value),
            PptKind::Interval(i) => format!("in [{}, {}]", show(&i.lo), show(&i.hi)),
            PptKind::UpperBoundOnly { bound } => format!("<= {}", show(bound)),
            PptKind::Unknown => "unknown".to_string(),
        }
    }
}

/// Dispatch from the computed invariants to the sharpest available statement.
///
/// `ffinfty` is `None` when the quasi-(F,F^∞) test did not run or gave no
/// answer; `a_invariant` is `None` for ungraded input.
pub fn ppt_report(
    p: u32,
    height: &HeightValue,
    ffinfty: Option<bool>,
    a_invariant: Option<i64>,
    assumptions: Assertions,
) -> PptResult {
    let make = |kind, justification, note: &str| PptResult {
        kind,
        justification,
        note: note.to_string(),
        assumptions,
        a_invariant,
    };
    if !assumptions.complete_intersection {
        return make(
            PptKind::Unknown,
            Justification::CompleteIntersectionNotAsserted,
            "threshold formulas hold for complete intersections; assert complete_intersection",
        );
    }
    match height {
        HeightValue::Finite(n) => {
            let n = *n;
            let ff = (ffinfty == Some(true)).then(|| ppt_exact_ffinfty(p, n));
            let cy = (a_invariant == Some(0)).then(|| ppt_exact_cy(p, n));
            match (ff, cy) {
                (Some(a), Some(b)) if a != b => make(
                    PptKind::Unknown,
                    Justification::ConflictingRules,
                    "quasi-(F,F^inf)-split and a = 0 give different values",
                ),
                (Some(value), _) => make(
                    PptKind::Exact { value },
                    Justification::FfInfinitySplit,
                    "quasi-(F,F^inf)-split of height n: 1 - i_{n-1}",
                ),
                (None, Some(value)) => make(
                    PptKind::Exact { value },
                    Justification::CalabiYauConstantSequence,
                    "graded complete intersection with a = 0: 1 - (p+...+p^{n-1})/(p^n-1)",
                ),
                (None, None) => {
                    let window = ppt_bounds(p, n);
                    let kind = if window.lo == window.hi {
                        PptKind::Exact { value: window.lo }
                    } else {
                        PptKind::Interval(window)
                    };
                    make(
                        kind,
                        Justification::HeightWindow,
                        "window determined by the height",
                    )
                }
            }
        }
        HeightValue::Infinite => make(
            PptKind::UpperBoundOnly {
                bound: non_qfs_ceiling(p),
            },
            Justification::NotQuasiFSplit,
            "if perfectoid pure at all, ppt <= (p-2)/(p-1)",
        ),
        HeightValue::Inconclusive { .. } => make(
            PptKind::Unknown,
            Justification::HeightInconclusive,
            "height not determined within the limits",
        ),
    }
}

pub fn render_fraction(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decimal rendering rounded half-up to `sig` significant digits, with
/// trailing zeros dropped. Display only.
pub fn render_decimal(r: &Rational, sig: u32) -> String {
    assert!(sig >= 1);
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let x = r.abs();
    let ten = BigInt::from(10);
    // Smallest k with x * 10^k >= 10^{sig-1}; k may be negative.
    let lower = num_traits::pow(ten.clone(), sig as usize - 1);
    let mut k: i64 = 0;
    let scaled = |k: i64| {
        if k >= 0 {
            &x * Rational::from_integer(num_traits::pow(ten.clone(), k as usize))
        } else {
            &x / Rational::from_integer(num_traits::pow(ten.clone(), (-k) as usize))
        }
    };
    while scaled(k) < Rational::from_integer(lower.clone()) {
        k += 1;
    }
    while scaled(k - 1) >= Rational::from_integer(lower.clone()) {
        k -= 1;
    }
    let v = scaled(k);
    let (q, rem) = v.numer().div_rem(v.denom());
    let mut digits = if rem * 2 >= *v.denom() { q + 1 } else { q };
    if digits == num_traits::pow(ten.clone(), sig as usize) {
        digits /= &ten;
        k -= 1;
    }
    let s = digits.to_string();
    let out = if k <= 0 {
        format!("{s}{}", "0".repeat((-k) as usize))
    } else {
        let k = k as usize;
        let (int_part, frac) = if s.len() > k {
            let (a, b) = s.split_at(s.len() - k);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{s}", "0".repeat(k - s.len())))
        };
        let frac = frac.trim_end_matches('0');
        if frac.is_empty() {
            int_part
        } else {
            format!("{int_part}.{frac}")
        }
    };
    format!("{sign}{out}")
}

/// Serializes rationals as `"n/d"` (or `"n"`) strings.
pub mod rational_text {
    use super::{render_fraction, Rational};
    use num_bigint::BigInt;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render_fraction(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).ok_or_else(|| de::Error::custom(format!("bad rational {text:?}")))
    }

    pub fn parse(text: &str) -> Option<Rational> {
        let (n, dd) = match text.split_once('/') {
            Some((n, dd)) => (n.trim(), dd.trim()),
            None => (text.trim(), "1"),
        };
        let n: BigInt = n.parse().ok()?;
        let dd: BigInt = dd.parse().ok()?;
        if dd == BigInt::from(0) {
            return None;
        }
        Some(Rational::new(n, dd))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_n_values() {
        assert_eq!(i_n(2, 1), rat(1, 2));
        assert_eq!(i_n(2, 3), rat(7, 8));
        assert_eq!(i_n(3, 2), rat(4, 9));
        assert_eq!(i_n(5, 0), rat(0, 1));
    }

    #[test]
    fn bounds_values() {
        for p in [2, 3, 5, 97] {
            assert_eq!(
                ppt_bounds(p, 1),
                Interval {
                    lo: rat(1, 1),
                    hi: rat(1, 1)
                }
            );
        }
        assert_eq!(
            ppt_bounds(2, 2),
            Interval {
                lo: rat(1, 3),
                hi: rat(1, 2)
            }
        );
        assert_eq!(
            ppt_bounds(2, 4),
            Interval {
                lo: rat(1, 15),
                hi: rat(1, 8)
            }
        );
    }

    #[test]
    fn exact_values() {
        assert_eq!(ppt_exact_ffinfty(2, 4), rat(1, 8));
        assert_eq!(ppt_exact_ffinfty(3, 3), rat(5, 9));
        assert_eq!(ppt_exact_ffinfty(5, 2), rat(4, 5));
        assert_eq!(ppt_exact_cy(2, 2), rat(1, 3));
        assert_eq!(ppt_exact_cy(5, 2), rat(19, 24));
        assert_eq!(ppt_exact_cy(7, 1), rat(1, 1));
    }

    #[test]
    fn digit_closed_forms() {
        let seq = DigitSequence::new(vec![3], vec![1]).unwrap();
        assert_eq!(ppt_from_digits(3, &seq), ppt_exact_ffinfty(3, 3));
        assert_eq!(
            ppt_from_digits(2, &DigitSequence::constant(2).unwrap()),
            rat(1, 3)
        );
        assert_eq!(
            ppt_from_digits(5, &DigitSequence::constant(1).unwrap()),
            rat(1, 1)
        );
        assert_eq!(
            DigitSequence::constant(2).unwrap().digits(3, 5),
            vec![1, 2, 1, 2, 1]
        );
        assert!(DigitSequence::new(vec![], vec![]).is_err());
        assert!(DigitSequence::new(vec![0], vec![1]).is_err());
    }

    #[test]
    fn report_dispatch() {
        let ci = Assertions {
            complete_intersection: true,
            ..Default::default()
        };
        let r = ppt_report(2, &HeightValue::Finite(2), Some(true), None, ci);
        assert_eq!(r.exact_value(), Some(&rat(1, 2)));
        let r = ppt_report(2, &HeightValue::Finite(3), Some(true), None, ci);
        assert_eq!(r.exact_value(), Some(&rat(1, 4)));
        let r = ppt_report(2, &HeightValue::Finite(2), Some(false), Some(0), ci);
        assert_eq!(r.exact_value(), Some(&rat(1, 3)));
        assert_eq!(r.justification, Justification::CalabiYauConstantSequence);
        let r = ppt_report(2, &HeightValue::Finite(3), Some(false), Some(-1), ci);
        assert_eq!(r.kind, PptKind::Interval(ppt_bounds(2, 3)));
        let r = ppt_report(3, &HeightValue::Infinite, None, None, ci);
        assert_eq!(r.kind, PptKind::UpperBoundOnly { bound: rat(1, 2) });
        let r = ppt_report(
            2,
            &HeightValue::Finite(2),
            Some(true),
            None,
            Assertions::default(),
        );
        assert_eq!(r.kind, PptKind::Unknown);
    }

    #[test]
    fn decimals() {
        assert_eq!(render_decimal(&rat(1, 8), 12), "0.125");
        assert_eq!(render_decimal(&rat(1, 3), 12), "0.333333333333");
        assert_eq!(render_decimal(&rat(2, 3), 12), "0.666666666667");
        assert_eq!(render_decimal(&rat(1, 1), 12), "1");
        assert_eq!(render_decimal(&rat(19, 24), 12), "0.791666666667");
        assert_eq!(render_decimal(&rat(-1, 15), 3), "-0.0667");
        assert_eq!(render_decimal(&rat(123456, 1), 3), "123000");
        assert_eq!(render_decimal(&rat(9999, 10000), 2), "1");
    }

    #[test]
    fn rational_text_round_trip() {
        let r = ppt_report(
            2,
            &HeightValue::Finite(4),
            Some(false),
            None,
            Assertions {
                complete_intersection: true,
                ..Default::default()
            },
        );
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"lo\":\"1/15\""));
        let back: PptResult = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
