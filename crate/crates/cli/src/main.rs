//! `catport`: run, verify, sweep and analyze teleportation protocols.
//!
//! Exit codes: 0 pass, 1 verification or fidelity failure, 2 usage or
//! configuration error.

mod curves;
mod report;
mod scenario;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use catport_core::locc::{enumerate, sample, validate_locality, Branch};
use catport_core::protocols::{script_for, MeasurementOrder, ProtocolError};
use clap::{Parser, Subcommand};

use report::{RunReport, Summary};
use scenario::{Scenario, ScenarioArgs};

/// Environment variable naming the directory for run reports.
pub const REPORT_DIR_VAR: &str = "CATPORT_REPORT_DIR";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, scenario or grid (exit 2).
    Usage(String),
    /// A check did not hold (exit 1).
    Failed(String),
}

impl From<ProtocolError> for CliError {
    fn from(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Locc(e) => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<catport_core::locc::LoccError> for CliError {
    fn from(e: catport_core::locc::LoccError) -> Self {
        CliError::Failed(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "catport", version, about = "Exact simulation of teleportation through GHZ, GHZ-class and cat channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario and write a JSON report.
    Run(RunArgs),
    /// Check every branch of many random scenarios.
    Verify(verify::VerifyArgs),
    /// Run the protocol over an |α|² grid and print the teleported entanglement as CSV.
    Sweep(curves::SweepArgs),
    /// Print channel and plane curves as CSV.
    Analyze(curves::AnalyzeArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// JSON scenario file; flags override its fields.
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    params: ScenarioArgs,
    /// Seed for the sampled branch (default 24301).
    #[arg(long)]
    seed: Option<u64>,
    /// Expand every branch instead of sampling one.
    #[arg(long)]
    enumerate: bool,
    /// Report file name, relative to $CATPORT_REPORT_DIR (default: current directory).
    #[arg(long, default_value = "catport-report.json")]
    report: PathBuf,
    /// Fidelity tolerance.
    #[arg(long, default_value_t = 1e-10)]
    fidelity_tol: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => verify::cmd_verify(args),
        Command::Sweep(args) => curves::cmd_sweep(args),
        Command::Analyze(args) => curves::cmd_analyze(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(msg)) => {
            eprintln!("catport: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("catport: {msg}");
            ExitCode::from(2)
        }
    }
}

fn branch_passes(branch: &Branch, tol: f64) -> bool {
    !branch.reachable || !branch.success || branch.fidelity.is_some_and(|f| f >= 1.0 - tol)
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let file = match &args.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    let scenario = file.overridden(&args.params);
    let seed = args.seed.unwrap_or_else(|| scenario.seed());
    let (input, channel) = scenario.build()?;
    let protocol = script_for(&input, &channel, MeasurementOrder::AliceFirst)?;

    let (mode, branches) = if args.enumerate {
        ("enumerate", enumerate(&protocol)?)
    } else {
        ("sample", vec![sample(&protocol, seed)?])
    };

    let locality_ok = branches.iter().all(|b| validate_locality(&b.transcript).is_ok());
    let fidelity_ok = branches.iter().all(|b| branch_passes(b, args.fidelity_tol));
    let min_fidelity = branches
        .iter()
        .filter(|b| b.reachable && b.success)
        .filter_map(|b| b.fidelity)
        .reduce(f64::min);
    let success_probability: f64 =
        branches.iter().filter(|b| b.reachable && b.success).map(|b| b.probability).sum();

    if let [branch] = branches.as_slice() {
        print!("{}", branch.transcript);
        println!("outcomes: {}", branch.outcome_tuple());
        if !branch.success {
            println!("filter failed: nothing was teleported");
        }
    } else {
        println!("script {} with {} branches", protocol.name, branches.len());
        for b in &branches {
            let fid = b.fidelity.map_or("-".to_owned(), |f| format!("{f:.12}"));
            let status = if !b.reachable {
                "unreachable"
            } else if !b.success {
                "aborted"
            } else {
                "ok"
            };
            println!("  {:<28} p = {:.12}  fidelity = {fid}  {status}", b.outcome_tuple(), b.probability);
        }
    }
    println!("target: {}", input.target());
    if let [branch] = branches.as_slice() {
        if let Some(bobs) = &branch.bob_state {
            println!("Bob state: {bobs}");
        }
    }
    match min_fidelity {
        Some(f) => println!("fidelity: {f:.12}"),
        None => println!("fidelity: n/a"),
    }
    match branches.as_slice() {
        [branch] => println!("branch probability: {:.12}", branch.probability),
        _ => println!("success probability: {success_probability:.12}"),
    }

    let summary = Summary {
        branches: branches.len(),
        reachable: branches.iter().filter(|b| b.reachable).count(),
        success_probability: report::sig12(success_probability),
        min_fidelity: min_fidelity.map(report::sig12),
        locality_ok,
        pass: locality_ok && fidelity_ok,
    };
    let report = RunReport::new(&protocol.name, mode, seed, &input, &channel, &branches, summary);
    let dir = std::env::var_os(REPORT_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    let path = dir.join(&args.report);
    std::fs::write(&path, report.to_json())
        .map_err(|e| CliError::Usage(format!("cannot write report {}: {e}", path.display())))?;
    println!("report: {}", path.display());

    if !locality_ok {
        return Err(CliError::Failed("transcript violates locality".into()));
    }
    if !fidelity_ok {
        let bad = branches.iter().find(|b| !branch_passes(b, args.fidelity_tol)).expect("a failing branch");
        return Err(CliError::Failed(format!(
            "branch {} reached fidelity {:.12}",
            bad.outcome_tuple(),
            bad.fidelity.unwrap_or(0.0)
        )));
    }
    Ok(())
}
