//! Weighted gradings, the a-invariant `a = Σ d_j - Σ w_i` of a graded
//! complete intersection, and the report logic that turns the sign of `a`
//! and the height into conclusions.

use serde::{Deserialize, Serialize};

use crate::fedder::HeightValue;
use crate::polyarith::ModPoly;
use crate::thresholds::{ppt_exact_cy, render_fraction, Assertions};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GradingError {
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("weights must be positive")]
    NonPositiveWeight,
    #[error("the zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("not weighted-homogeneous: {first} has degree {first_degree}, {second} has degree {second_degree}")]
    Inhomogeneous {
        first: String,
        first_degree: u64,
        second: String,
        second_degree: u64,
    },
}

/// Positive weights `w_i` and the degrees `d_j` of the defining equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub weights: Vec<u32>,
    pub degrees: Vec<u64>,
}

fn render_exponents(e: &[u32]) -> String {
    let parts: Vec<String> = e.iter().map(u32::to_string).collect();
    format!("x^({})", parts.join(","))
}

/// The common weighted degree of the monomials of `f`.
pub fn check_homogeneous(f: &ModPoly, weights: &[u32]) -> Result<u64, GradingError> {
    if weights.len() != f.nvars() {
        return Err(GradingError::WeightCount {
            expected: f.nvars(),
            got: weights.len(),
        });
    }
    if weights.contains(&0) {
        return Err(GradingError::NonPositiveWeight);
    }
    let degree = |e: &[u32]| {
        e.iter()
            .zip(weights)
            .map(|(&a, &w)| a as u64 * w as u64)
            .sum::<u64>()
    };
    let mut terms = f.terms().iter();
    let (first, _) = terms.next().ok_or(GradingError::ZeroPolynomial)?;
    let d = degree(first.exponents());
    for (m, _) in terms {
        let e = degree(m.exponents());
        if e != d {
            return Err(GradingError::Inhomogeneous {
                first: render_exponents(first.exponents()),
                first_degree: d,
                second: render_exponents(m.exponents()),
                second_degree: e,
            });
        }
    }
    Ok(d)
}

impl Grading {
    /// Checks that every reduction `f̄_j` is weighted-homogeneous.
    pub fn new(reductions: &[ModPoly], weights: Vec<u32>) -> Result<Self, GradingError> {
        let degrees = reductions
            .iter()
            .map(|f| check_homogeneous(f, &weights))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { weights, degrees })
    }
}

pub fn a_invariant(g: &Grading) -> i64 {
    let d: u64 = g.degrees.iter().sum();
    let w: u64 = g.weights.iter().map(|&w| w as u64).sum();
    d as i64 - w as i64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Positive,
    CalabiYau,
    Fano,
}

impl Regime {
    pub fn of(a: i64) -> Self {
        match a.signum() {
            1 => Regime::Positive,
            0 => Regime::CalabiYau,
            _ => Regime::Fano,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// All hypotheses were asserted or computed.
    Holds,
    /// Holds once the listed missing hypotheses are supplied.
    Conditional,
    /// The computed data contradict a theorem; points at a bug or bad input.
    ConsistencyFailure,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Asserted,
    Computed,
    Missing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dependency {
    pub source: Source,
    pub what: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub statement: String,
    pub status: Status,
    pub depends_on: Vec<Dependency>,
}

impl Conclusion {
    fn new(statement: impl Into<String>, depends_on: Vec<Dependency>) -> Self {
        let status = if depends_on.iter().any(|d| d.source == Source::Missing) {
            Status::Conditional
        } else {
            Status::Holds
        };
        Self {
            statement: statement.into(),
            status,
            depends_on,
        }
    }

    fn failure(statement: impl Into<String>, depends_on: Vec<Dependency>) -> Self {
        Self {
            statement: statement.into(),
            status: Status::ConsistencyFailure,
            depends_on,
        }
    }
}

fn computed(what: impl Into<String>) -> Dependency {
    Dependency {
        source: Source::Computed,
        what: what.into(),
    }
}

fn assertion(name: &str, given: bool) -> Dependency {
    let source = if given {
        Source::Asserted
    } else {
        Source::Missing
    };
    Dependency {
        source,
        what: name.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedReport {
    pub grading: Grading,
    pub a_invariant: i64,
    pub regime: Regime,
    pub conclusions: Vec<Conclusion>,
}

impl GradedReport {
    pub fn consistency_failure(&self) -> bool {
        self.conclusions
            .iter()
            .any(|c| c.status == Status::ConsistencyFailure)
    }
}

/// Turns the regime and the height into conclusions, each carrying the
/// hypotheses it rests on.
pub fn graded_dispatch(
    p: u32,
    grading: &Grading,
    height: &HeightValue,
    assertions: &Assertions,
) -> GradedReport {
    let a = a_invariant(grading);
    let regime = Regime::of(a);
    let a_dep = || computed(format!("a = {a}"));
    let ci = || assertion("complete_intersection", assertions.complete_intersection);
    let mut out = Vec::new();
    let height_dep = |h: &HeightValue| {
        computed(match h {
            HeightValue::Finite(n) => format!("height = {n}"),
            HeightValue::Infinite => "height = infinity".to_string(),
            HeightValue::Inconclusive { .. } => "height inconclusive".to_string(),
        })
    };

    match regime {
        Regime::Positive => match height {
            HeightValue::Finite(n) => out.push(Conclusion::failure(
                format!(
                    "finite height {n} with a = {a} > 0: quasi-F-split graded rings have a <= 0"
                ),
                vec![a_dep(), height_dep(height)],
            )),
            _ => out.push(Conclusion::new(
                "not quasi-F-split, as forced by a > 0",
                vec![a_dep()],
            )),
        },
        Regime::CalabiYau => {
            out.push(Conclusion::new(
                "ht(R) = ht(R/p) (Gorenstein with a = 0; complete intersections are Gorenstein)",
                vec![a_dep(), ci()],
            ));
            if let HeightValue::Finite(n) = height {
                out.push(Conclusion::new(
                    format!(
                        "perfectoid pure with ppt(R; div(p)) = {}",
                        render_fraction(&ppt_exact_cy(p, *n))
                    ),
                    vec![a_dep(), height_dep(height), ci()],
                ));
            }
        }
        Regime::Fano => {
            let fano_hyps = || {
                vec![
                    a_dep(),
                    assertion("normal", assertions.normal),
                    assertion("quasi_gorenstein", assertions.quasi_gorenstein),
                    assertion("sfr_punctured", assertions.sfr_punctured),
                ]
            };
            match height {
                HeightValue::Finite(_) => {
                    let mut deps = fano_hyps();
                    deps.push(height_dep(height));
                    out.push(Conclusion::new("perfectoid BCM-regular", deps));
                }
                HeightValue::Infinite if p == 2 => {
                    let mut deps = fano_hyps();
                    if deps.iter().all(|d| d.source != Source::Missing) {
                        deps.push(computed("p = 2"));
                        deps.push(height_dep(height));
                        out.push(Conclusion::new(
                            "NOT perfectoid BCM-regular (converse at p = 2)",
                            deps,
                        ));
                    }
                }
                HeightValue::Infinite => out.push(Conclusion::new(
                    "not quasi-F-split; BCM-regularity is not decided for p > 2",
                    vec![height_dep(height)],
                )),
                HeightValue::Inconclusive { .. } => {}
            }
        }
    }
    if p == 2 && *height == HeightValue::Infinite {
        out.push(Conclusion::new(
            "NOT perfectoid BCM-regular (Gorenstein, p = 2, not quasi-F-split)",
            vec![ci(), computed("p = 2"), height_dep(height)],
        ));
    }
    GradedReport {
        grading: grading.clone(),
        a_invariant: a,
        regime,
        conclusions: out,
    }
}
