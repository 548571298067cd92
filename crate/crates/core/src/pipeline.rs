//! Job configuration, built-in presets and the end-to-end pipeline
//! (height, stable ideal, quasi-(F,F^∞) test, thresholds, graded dispatch)
//! behind the command-line front end.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::fedder::{self, Analysis, CIInput, ChainOptions, FedderError, HeightValue, IdealChain};
use crate::graded::{graded_dispatch, GradedReport, Grading};
use crate::groebner::{GroebnerBasis, DEFAULT_GB_BUDGET};
use crate::polyarith::{parse_poly, ModPoly, PrimeContext};
use crate::thresholds::{ppt_report, Assertions, PptKind, PptResult};

/// Lifts are read modulo `p^2`, which is all the chains depend on.
const LIFT_PRECISION: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Limits {
    pub max_height: u32,
    pub sigma_budget: u32,
    pub gb_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        let d = ChainOptions::default();
        Self {
            max_height: d.max_height,
            sigma_budget: d.sigma_budget,
            gb_budget: DEFAULT_GB_BUDGET,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub p: u32,
    pub variables: Vec<String>,
    pub lifts: Vec<String>,
    #[serde(default)]
    pub weights: Option<Vec<u32>>,
    #[serde(default)]
    pub assertions: Assertions,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub output: OutputMode,
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        serde_json::from_str(text).map_err(|e| PipelineError::Input(format!("config: {e}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("input error: {0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Input(_) => 1,
            PipelineError::Internal(_) => 2,
        }
    }
}

impl From<FedderError> for PipelineError {
    fn from(e: FedderError) -> Self {
        match e {
            FedderError::Input(m) => PipelineError::Input(m),
            other => PipelineError::Internal(other.to_string()),
        }
    }
}

fn vars(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn job(
    p: u32,
    variables: &[&str],
    lifts: &[&str],
    weights: Option<Vec<u32>>,
    assertions: Assertions,
) -> JobConfig {
    JobConfig {
        p,
        variables: vars(variables),
        lifts: lifts.iter().map(|s| s.to_string()).collect(),
        weights,
        assertions,
        limits: Limits::default(),
        output: OutputMode::Text,
    }
}

const CI: Assertions = Assertions {
    complete_intersection: true,
    normal: false,
    quasi_gorenstein: false,
    sfr_punctured: false,
};
/// Two-dimensional rational double points: normal, Gorenstein, with regular
/// punctured spectrum.
const RDP: Assertions = Assertions {
    complete_intersection: true,
    normal: true,
    quasi_gorenstein: true,
    sfr_punctured: true,
};

/// Names accepted by [`preset`]; `fedder5-n<k>` takes any `k ≥ 2`.
pub const PRESET_NAMES: &[&str] = &[
    "fedder1",
    "fedder2-p2",
    "fedder2-p3",
    "fedder2-p5",
    "fedder3",
    "fedder4",
    "fedder5-n<k>",
    "non-qfs",
    "fermat-ell",
    "fermat-ell-p5",
];

pub fn preset(name: &str) -> Option<JobConfig> {
    let xyz = ["x", "y", "z"];
    let xyzw = ["x", "y", "z", "w"];
    let rdp = |p| job(p, &xyz, &["z^2+x^3+y^5"], Some(vec![10, 6, 15]), RDP);
    let fermat = |p| job(p, &xyz, &["x^3+y^3+z^3"], Some(vec![1, 1, 1]), CI);
    Some(match name {
        "fedder1" | "fermat-ell" => fermat(2),
        "fermat-ell-p5" => fermat(5),
        "fedder2-p2" => rdp(2),
        "fedder2-p3" => rdp(3),
        "fedder2-p5" => rdp(5),
        "fedder3" => job(2, &xyzw, &["w^2+x*y*z*(x+y+z)"], Some(vec![1, 1, 1, 2]), CI),
        "fedder4" => job(
            2,
            &xyzw,
            &["w^2+x*y*z*(x+y+z)+2*(x*y+x*z+y*z)*w"],
            Some(vec![1, 1, 1, 2]),
            CI,
        ),
        "non-qfs" => job(
            2,
            &["x", "y", "z", "x'", "y'", "z'"],
            &["x^3+y^3+z^3", "x'^3+y'^3+z'^3"],
            Some(vec![1; 6]),
            CI,
        ),
        _ => {
            let n: u32 = name.strip_prefix("fedder5-n")?.parse().ok()?;
            if n < 2 {
                return None;
            }
            // z^2 + x^2 y + x y^n is homogeneous for weights (2(n-1), 2, 2n-1).
            let lift = format!("z^2+x^2*y+x*y^{n}");
            job(
                2,
                &xyz,
                &[lift.as_str()],
                Some(vec![2 * (n - 1), 2, 2 * n - 1]),
                RDP,
            )
        }
    })
}

/// Which parts of the pipeline to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Height,
    Ppt,
    Chain,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HeightSummary {
    Finite {
        height: u32,
        witness: String,
    },
    Infinite {
        stable_from: u32,
        stable_generators: Vec<String>,
    },
    Inconclusive {
        max_reached: u32,
        reason: String,
    },
}

impl HeightSummary {
    pub fn value(&self) -> HeightValue {
        match self {
            HeightSummary::Finite { height, .. } => HeightValue::Finite(*height),
            HeightSummary::Infinite { .. } => HeightValue::Infinite,
            HeightSummary::Inconclusive {
                max_reached,
                reason,
            } => HeightValue::Inconclusive {
                max_reached: *max_reached,
                reason: reason.clone(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableSummary {
    pub generators: Vec<String>,
    /// First `e` with `J_e = J_{e+1}`.
    pub stabilized_at: u32,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Level {
    pub index: u32,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDump {
    /// Literal generators `f̄^{p-1}, f̄_j^p` of `I_1` before reduction.
    pub i1_literal: Vec<String>,
    pub i_chain: Vec<Level>,
    pub j_descent: Vec<Level>,
    pub iprime_chain: Vec<Level>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Command,
    pub config: JobConfig,
    pub height: HeightSummary,
    pub gb_steps: u64,
    pub stable_ideal: Option<StableSummary>,
    pub stable_ideal_error: Option<String>,
    pub ffinfty: Option<bool>,
    pub ffinfty_note: Option<String>,
    pub ppt: Option<PptResult>,
    pub graded: Option<GradedReport>,
    pub chains: Option<ChainDump>,
    pub consistency_failures: Vec<String>,
    /// Wall-clock time; the only field that varies between identical runs.
    pub timing_ms: u64,
}

impl Report {
    /// 0 success, 2 consistency failure, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        if !self.consistency_failures.is_empty() {
            return 2;
        }
        let inconclusive_height = matches!(self.height, HeightSummary::Inconclusive { .. });
        let inconclusive_ppt = self.command == Command::Ppt
            && self.ffinfty_note.is_some()
            && matches!(
                self.ppt.as_ref().map(|r| &r.kind),
                Some(PptKind::Unknown) | Some(PptKind::Interval(_))
            );
        if inconclusive_height || inconclusive_ppt {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        out.push_str(&format!(
            "p = {}, variables = [{}]\n",
            c.p,
            c.variables.join(", ")
        ));
        for l in &c.lifts {
            out.push_str(&format!("  lift: {l}\n"));
        }
        match &self.height {
            HeightSummary::Finite { height, witness } => out.push_str(&format!(
                "height: {height}\n  witness outside m^[p]: {witness}\n"
            )),
            HeightSummary::Infinite {
                stable_from,
                stable_generators,
            } => out.push_str(&format!(
                "height: infinite\n  certificate: I_{0} = I_{1} inside m^[p] ({2} generators)\n",
                stable_from,
                stable_from + 1,
                stable_generators.len()
            )),
            HeightSummary::Inconclusive {
                max_reached,
                reason,
            } => out.push_str(&format!(
                "height: inconclusive after level {max_reached} ({reason})\n"
            )),
        }
        if let Some(s) = &self.stable_ideal {
            out.push_str(&format!(
                "stable ideal I' = ({})\n",
                s.generators.join(", ")
            ));
        }
        if let Some(e) = &self.stable_ideal_error {
            out.push_str(&format!("stable ideal: {e}\n"));
        }
        match self.ffinfty {
            Some(b) => out.push_str(&format!("quasi-(F,F^inf)-split: {b}\n")),
            None if self.command != Command::Height => {
                out.push_str("quasi-(F,F^inf)-split: not decided\n")
            }
            None => {}
        }
        if let Some(n) = &self.ffinfty_note {
            out.push_str(&format!("  {n}\n"));
        }
        if let Some(r) = &self.ppt {
            out.push_str(&format!(
                "ppt(R; div(p)): {}\n  [{:?}] {}\n",
                r.render(),
                r.justification,
                r.note
            ));
        }
        if let Some(g) = &self.graded {
            out.push_str(&format!(
                "a-invariant: {} ({:?})\n",
                g.a_invariant, g.regime
            ));
            for c in &g.conclusions {
                let deps: Vec<String> = c
                    .depends_on
                    .iter()
                    .map(|d| format!("{:?}: {}", d.source, d.what).to_lowercase())
                    .collect();
                out.push_str(&format!(
                    "  [{:?}] {} <- {}\n",
                    c.status,
                    c.statement,
                    deps.join("; ")
                ));
            }
        }
        if let Some(d) = &self.chains {
            let mut dump = |title: &str, levels: &[Level]| {
                for l in levels {
                    out.push_str(&format!(
                        "{title}_{} = ({})\n",
                        l.index,
                        l.generators.join(", ")
                    ));
                }
            };
            dump("I", &d.i_chain);
            dump("J", &d.j_descent);
            dump("I'", &d.iprime_chain);
        }
        for f in &self.consistency_failures {
            out.push_str(&format!("CONSISTENCY FAILURE: {f}\n"));
        }
        let a = &c.assertions;
        out.push_str(&format!(
            "assertions: complete_intersection={}, normal={}, quasi_gorenstein={}, sfr_punctured={}\n",
            a.complete_intersection, a.normal, a.quasi_gorenstein, a.sfr_punctured
        ));
        out
    }
}

/// Parsed and validated job.
pub struct PreparedJob {
    pub config: JobConfig,
    pub input: CIInput,
    pub grading: Option<Grading>,
}

pub fn prepare(config: &JobConfig) -> Result<PreparedJob, PipelineError> {
    let ctx = PrimeContext::new(config.p, &config.variables)
        .map_err(|e| PipelineError::Input(e.to_string()))?;
    let lifts = config
        .lifts
        .iter()
        .map(|s| {
            parse_poly(s, &ctx, LIFT_PRECISION)
                .map_err(|e| PipelineError::Input(format!("{s:?}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let options = ChainOptions {
        max_height: config.limits.max_height,
        sigma_budget: config.limits.sigma_budget,
        gb_budget: config.limits.gb_budget,
    };
    if options.max_height == 0 {
        return Err(PipelineError::Input("max_height must be at least 1".into()));
    }
    let reductions: Vec<ModPoly> = lifts.iter().map(|f| f.mod_p()).collect();
    let input = CIInput::new(ctx, lifts, options)?;
    let grading = match &config.weights {
        Some(w) => Some(
            Grading::new(&reductions, w.clone())
                .map_err(|e| PipelineError::Input(e.to_string()))?,
        ),
        None => None,
    };
    Ok(PreparedJob {
        config: config.clone(),
        input,
        grading,
    })
}

fn render_all(gb: &GroebnerBasis, names: &[String]) -> Vec<String> {
    gb.basis().iter().map(|g| g.render(names)).collect()
}

fn levels(chain: &IdealChain, first_index: u32, names: &[String], limit: usize) -> Vec<Level> {
    chain
        .ideals
        .iter()
        .take(limit)
        .enumerate()
        .map(|(i, gb)| Level {
            index: first_index + i as u32,
            generators: render_all(gb, names),
        })
        .collect()
}

const STABLE_NOTE: &str = "ambient ideal of the stable image of the iterated traces of f^(p^e-1); \
reported as information only, not as a computed test-ideal certification";

/// Runs the pipeline. `dump_levels` caps the number of levels per chain in a
/// chain dump (`None` means all).
pub fn run(
    command: Command,
    config: &JobConfig,
    dump_levels: Option<usize>,
) -> Result<Report, PipelineError> {
    let start = Instant::now();
    let job = prepare(config)?;
    let names = job.input.ctx().names().to_vec();
    let p = config.p;

    let analysis: Analysis = if command == Command::Height {
        let height = fedder::height(&job.input)?;
        Analysis {
            height,
            stable: Err(fedder::StableIdealError::SigmaBudget(0)),
            ffinfty: None,
            ffinfty_inconclusive: None,
        }
    } else {
        fedder::analyze(&job.input)?
    };

    let h = &analysis.height;
    let height = match &h.value {
        HeightValue::Finite(n) => HeightSummary::Finite {
            height: *n,
            witness: h
                .witness
                .as_ref()
                .map(|w| w.render(&names))
                .unwrap_or_default(),
        },
        HeightValue::Infinite => {
            let cert = h.certificate.as_ref().ok_or_else(|| {
                PipelineError::Internal("infinite height without certificate".into())
            })?;
            HeightSummary::Infinite {
                stable_from: cert.index,
                stable_generators: render_all(&cert.stable, &names),
            }
        }
        HeightValue::Inconclusive {
            max_reached,
            reason,
        } => HeightSummary::Inconclusive {
            max_reached: *max_reached,
            reason: reason.clone(),
        },
    };

    let mut report = Report {
        tool: "qfs".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command,
        config: config.clone(),
        height,
        gb_steps: h.gb_steps,
        stable_ideal: None,
        stable_ideal_error: None,
        ffinfty: None,
        ffinfty_note: None,
        ppt: None,
        graded: None,
        chains: None,
        consistency_failures: Vec::new(),
        timing_ms: 0,
    };

    if command != Command::Height {
        match &analysis.stable {
            Ok(s) => {
                report.stable_ideal = Some(StableSummary {
                    generators: render_all(&s.ideal, &names),
                    stabilized_at: s.stabilized_at,
                    note: STABLE_NOTE.to_string(),
                })
            }
            Err(e) => report.stable_ideal_error = Some(e.to_string()),
        }
        report.ffinfty = analysis.ffinfty.as_ref().map(|f| f.split);
        report.ffinfty_note = match (&h.value, &analysis.ffinfty_inconclusive, &analysis.stable) {
            (_, Some(reason), _) => Some(format!("I'-chain gave up: {reason}")),
            (HeightValue::Finite(_), None, Err(e)) => Some(format!("I' unavailable: {e}")),
            (HeightValue::Infinite, _, _) => {
                Some("not quasi-F-split, hence not quasi-(F,F^inf)-split".into())
            }
            _ => None,
        };
        let graded = job
            .grading
            .as_ref()
            .map(|g| graded_dispatch(p, g, &h.value, &config.assertions));
        let a = graded.as_ref().map(|g| g.a_invariant);
        report.ppt = Some(ppt_report(
            p,
            &h.value,
            report.ffinfty,
            a,
            config.assertions,
        ));
        if let Some(g) = &graded {
            for c in g
                .conclusions
                .iter()
                .filter(|c| c.status == crate::graded::Status::ConsistencyFailure)
            {
                report.consistency_failures.push(c.statement.clone());
            }
        }
        report.graded = graded;
    }

    if command == Command::Chain {
        let limit = dump_levels.unwrap_or(usize::MAX);
        let input = &job.input;
        let mut i1_literal = vec![input.f_bar_power().render(&names)];
        i1_literal.extend(
            input
                .frobenius_power_gens()
                .iter()
                .map(|g| g.render(&names)),
        );
        report.chains = Some(ChainDump {
            i1_literal: if limit == 0 { Vec::new() } else { i1_literal },
            i_chain: levels(&h.chain, 1, &names, limit),
            j_descent: analysis
                .stable
                .as_ref()
                .map(|s| levels(&s.chain, 0, &names, limit))
                .unwrap_or_default(),
            iprime_chain: analysis
                .ffinfty
                .as_ref()
                .map(|f| levels(&f.chain, 1, &names, limit))
                .unwrap_or_default(),
        });
    }

    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for name in PRESET_NAMES.iter().filter(|n| !n.contains('<')) {
            let cfg = preset(name).unwrap();
            assert!(prepare(&cfg).is_ok(), "{name}");
        }
        for n in [2, 3, 9, 17] {
            let cfg = preset(&format!("fedder5-n{n}")).unwrap();
            let job = prepare(&cfg).unwrap();
            assert_eq!(
                crate::graded::a_invariant(job.grading.as_ref().unwrap()),
                -1
            );
        }
        assert!(preset("fedder5-n1").is_none());
        assert!(preset("nope").is_none());
    }

    #[test]
    fn nonprime_is_input_error() {
        let mut cfg = preset("fedder1").unwrap();
        cfg.p = 4;
        assert_eq!(run(Command::Height, &cfg, None).unwrap_err().exit_code(), 1);
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = preset("fedder4").unwrap();
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(JobConfig::from_json(&text).unwrap(), cfg);
        let minimal = r#"{"p": 3, "variables": ["x","y"], "lifts": ["x*y"]}"#;
        let cfg = JobConfig::from_json(minimal).unwrap();
        assert_eq!(cfg.limits, Limits::default());
        assert!(
            JobConfig::from_json(r#"{"p": 3, "variables": [], "lifts": [], "bogus": 1}"#).is_err()
        );
    }
}
