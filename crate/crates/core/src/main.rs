use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use geogate::acceptance::{run_all, CriterionOutcome};
use geogate::experiments::{run_experiment, ExperimentId, ExperimentParams, GateChoice, SolveMechanism};
use geogate::report::ExperimentReport;
use geogate::sweep::{run_sweep, SweepConfig};
use geogate::{Error, TOOL_VERSION};

#[derive(Parser)]
#[command(name = "geogate", version, about = "Geometric-phase gate experiments and acceptance checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Berry-phase single-qubit gate from the two-cycle echo.
    SingleBerry(RunArgs),
    /// Aharonov-Anandan single-qubit gate with zero dynamical phase.
    SingleAa(RunArgs),
    /// Two-qubit Berry phases and factorization audit.
    TwoBerry(RunArgs),
    /// Two-qubit AA phases, J dependence and factorization audit.
    TwoAa(RunArgs),
    /// Exchange gates and the five-factor CNOT-class sequence.
    HybridCnot(RunArgs),
    /// Solve and print gate parameters for a target phase.
    SolveParams(RunArgs),
    /// Run one experiment over a parameter axis read from a TOML file.
    Sweep {
        file: PathBuf,
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Run every acceptance criterion.
    All {
        #[arg(long, default_value = "reports")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Report directory.
    #[arg(long, default_value = "reports")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Steps per segment for stepped propagation.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    slowness: Option<f64>,
    /// Override of the headline threshold.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// pi8 or hadamard.
    #[arg(long)]
    gate: Option<GateChoice>,
    /// berry or aa (solve-params).
    #[arg(long)]
    mechanism: Option<SolveMechanism>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa_alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    kappa_beta: Option<f64>,
    #[arg(long = "J", allow_negative_numbers = true)]
    j: Option<f64>,
}

impl RunArgs {
    fn params(&self) -> ExperimentParams {
        let mut p = ExperimentParams::default();
        macro_rules! set {
            ($($field:ident),*) => { $( if let Some(v) = self.$field { p.$field = v; } )* };
        }
        set!(seed, slowness, gate, mechanism, b0, b1, omega, kappa_alpha, kappa_beta, j);
        p.steps = self.steps.or(p.steps);
        p.tol = self.tol.or(p.tol);
        p.gamma = self.gamma.or(p.gamma);
        p.kappa = self.kappa.or(p.kappa);
        p
    }
}

/// Usage or configuration failure: exit 2.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn io_error(dir: &Path, e: std::io::Error) -> UsageError {
    UsageError(format!("cannot write to {}: {e}", dir.display()))
}

fn print_report(r: &ExperimentReport, path: &Path) {
    let verdict = if r.pass { "PASS" } else { "FAIL" };
    println!("[{verdict}] {} -> {}", r.experiment_id, path.display());
    for c in &r.checks {
        let mark = if c.pass { "ok" } else { "FAILED" };
        println!("    {:<32} {:>12.4e}  {} {:.1e}  {mark}", c.name, c.value, c.relation, c.threshold);
    }
}

#[derive(Serialize)]
struct AllSummary<'a> {
    experiment_id: &'static str,
    tool_version: &'static str,
    seed: u64,
    criteria: &'a [CriterionOutcome],
    pass: bool,
}

fn run(cli: Cli) -> Result<bool, UsageError> {
    let (id, args) = match cli.command {
        Command::SingleBerry(a) => (ExperimentId::SingleBerry, a),
        Command::SingleAa(a) => (ExperimentId::SingleAa, a),
        Command::TwoBerry(a) => (ExperimentId::TwoBerry, a),
        Command::TwoAa(a) => (ExperimentId::TwoAa, a),
        Command::HybridCnot(a) => (ExperimentId::HybridCnot, a),
        Command::SolveParams(a) => (ExperimentId::SolveParams, a),
        Command::Sweep { file, out } => {
            let outcome = run_sweep(&SweepConfig::load(&file)?)?;
            let paths = outcome.write_to(&out)?;
            for (r, p) in outcome.reports.iter().zip(&paths) {
                print_report(r, p);
            }
            println!("sweep over {} ({} points) -> {}", outcome.axis.name(), outcome.rows.len(), out.join("sweep.csv").display());
            return Ok(outcome.pass());
        }
        Command::All { out, seed } => {
            let seed = seed.unwrap_or(geogate::random::DEFAULT_SEED);
            let outcomes = run_all(seed);
            for o in &outcomes {
                println!("{}", o.summary_line());
            }
            let pass = outcomes.iter().all(|o| o.pass);
            let summary = AllSummary { experiment_id: "all", tool_version: TOOL_VERSION, seed, criteria: &outcomes, pass };
            std::fs::create_dir_all(&out).map_err(|e| io_error(&out, e))?;
            let path = out.join("all.json");
            let json = serde_json::to_string_pretty(&summary).map_err(|e| UsageError(e.to_string()))?;
            std::fs::write(&path, json).map_err(|e| io_error(&out, e))?;
            let passed = outcomes.iter().filter(|o| o.pass).count();
            println!("{passed}/{} criteria passed -> {}", outcomes.len(), path.display());
            return Ok(pass);
        }
    };
    let report = run_experiment(id, &args.params())?;
    let path = report.write_to(&args.out, "").map_err(|e| io_error(&args.out, e))?;
    print_report(&report, &path);
    Ok(report.pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("geogate: {msg}");
            ExitCode::from(2)
        }
    }
}
