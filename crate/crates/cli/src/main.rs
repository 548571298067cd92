use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qfs_core::pipeline::{self, Command, JobConfig, OutputMode, PipelineError, PRESET_NAMES};
use qfs_core::witt::{selftest, within_limits, WITT_LIMITS};

#[derive(Parser)]
#[command(
    name = "qfs",
    version,
    about = "Quasi-F-split heights, quasi-(F,F^inf)-splitting and perfectoid pure thresholds"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Quasi-F-split height with witness or stabilization certificate.
    Height(JobArgs),
    /// Full pipeline: height, I', quasi-(F,F^inf) test, threshold, graded dispatch.
    Ppt(JobArgs),
    /// Full pipeline plus generator lists for every chain level.
    Chain(JobArgs),
    /// Randomized property suite for the Witt vector kernel.
    WittSelftest(WittArgs),
}

#[derive(Args)]
struct JobArgs {
    /// JSON job file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    input: Option<PathBuf>,
    /// Built-in example (see --help for names).
    #[arg(long, long_help = preset_help())]
    preset: Option<String>,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
    /// Largest chain index tried before reporting inconclusive
    #[arg(long)]
    max_height: Option<u32>,
    /// Maximum number of descent steps when computing the stable ideal I'
    #[arg(long)]
    sigma_budget: Option<u32>,
    /// Buchberger reduction-step budget
    #[arg(long)]
    gb_budget: Option<u64>,
    /// Levels per chain to print (chain command); 0 prints nothing.
    #[arg(long, visible_alias = "levels")]
    dump_levels: Option<usize>,
    /// Accepted for interface uniformity; the pipeline is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct WittArgs {
    #[arg(long, default_value_t = 2)]
    p: u32,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

fn preset_help() -> String {
    format!("Built-in example: {}", PRESET_NAMES.join(", "))
}

fn load(args: &JobArgs) -> Result<JobConfig, PipelineError> {
    let mut cfg = match (&args.input, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))?;
            JobConfig::from_json(&text)?
        }
        (None, Some(name)) => pipeline::preset(name).ok_or_else(|| {
            PipelineError::Input(format!(
                "unknown preset {name:?}; known: {}",
                PRESET_NAMES.join(", ")
            ))
        })?,
        (None, None) => {
            return Err(PipelineError::Input(
                "one of --input or --preset is required".into(),
            ))
        }
    };
    if let Some(v) = args.max_height {
        cfg.limits.max_height = v;
    }
    if let Some(v) = args.sigma_budget {
        cfg.limits.sigma_budget = v;
    }
    if let Some(v) = args.gb_budget {
        cfg.limits.gb_budget = v;
    }
    if args.json {
        cfg.output = OutputMode::Json;
    }
    Ok(cfg)
}

fn run_job(command: Command, args: &JobArgs) -> u8 {
    let result = load(args).and_then(|cfg| pipeline::run(command, &cfg, args.dump_levels));
    match result {
        Ok(report) => {
            if report.config.output == OutputMode::Json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_text());
            }
            report.exit_code() as u8
        }
        Err(e) => {
            eprintln!("qfs: {e}");
            e.exit_code() as u8
        }
    }
}

fn run_witt(args: &WittArgs) -> u8 {
    if !within_limits(args.p, args.n) {
        let limits: Vec<String> = WITT_LIMITS
            .iter()
            .map(|(p, n)| format!("p={p}: 2<=n<={n}"))
            .collect();
        eprintln!(
            "qfs: witt-selftest outside supported limits ({})",
            limits.join(", ")
        );
        return 1;
    }
    let report = selftest(args.p, args.n, args.trials, args.seed);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("reports serialize")
        );
    } else {
        println!(
            "witt selftest p={} n={} trials={} seed={}",
            report.p, report.n, report.trials, report.seed
        );
        for c in &report.checks {
            let tag = if c.failed == 0 { "PASS" } else { "FAIL" };
            println!(
                "  {tag} {:<28} {}/{}",
                c.name,
                c.passed,
                c.passed + c.failed
            );
            if let Some(f) = &c.first_failure {
                println!("       first failure: {f}");
            }
        }
    }
    if report.all_passed() {
        0
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Cmd::Height(a) => run_job(Command::Height, a),
        Cmd::Ppt(a) => run_job(Command::Ppt, a),
        Cmd::Chain(a) => run_job(Command::Chain, a),
        Cmd::WittSelftest(a) => run_witt(a),
    };
    ExitCode::from(code)
}
