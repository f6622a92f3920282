//! Command-line front end: parse a polynomial mapping file, run the
//! requested analysis stages and print a human summary (optionally writing
//! the full JSON report).
//!
//! Exit codes: 0 on success, 2 on input errors, 3 on guard violations.

use atinfinity::report::{exit_code_for, run_pipeline, Config};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "atinfinity", version, about = "Polynomial mapping analysis via Newton polyhedra at infinity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a polynomial mapping file.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input mapping file.
    file: PathBuf,
    /// Write the full JSON report to this path.
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
    /// Check Newton non-degeneracy at infinity.
    #[arg(long)]
    check_nd: bool,
    /// Compute the bifurcation-bound sets and invertibility verdict.
    #[arg(long)]
    bound: bool,
    /// Compare the singular-locus and zero-set non-degeneracy forms
    /// (real setting only).
    #[arg(long)]
    compare_definitions: bool,
    /// Run the numeric asymptotic-value search.
    #[arg(long)]
    numeric: bool,
    /// Export undecided face systems as plain-text files into this directory.
    #[arg(long, value_name = "DIR")]
    export_systems: Option<PathBuf>,
    /// Radius schedule for the numeric search, as R0:FACTOR:COUNT.
    #[arg(long, value_name = "R0:FACTOR:COUNT")]
    radii: Option<String>,
    /// Restarts per radius for the numeric search.
    #[arg(long, value_name = "N")]
    restarts: Option<usize>,
    /// Seed for all randomized stages.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Residual tolerance override.
    #[arg(long, value_name = "T")]
    tol: Option<f64>,
    /// Translate away nonzero constant terms instead of rejecting them.
    #[arg(long)]
    translate: bool,
}

fn parse_radii(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected R0:FACTOR:COUNT, got '{s}'"));
    }
    let r0: f64 = parts[0].parse().map_err(|e| format!("bad R0 '{}': {e}", parts[0]))?;
    let factor: f64 = parts[1].parse().map_err(|e| format!("bad FACTOR '{}': {e}", parts[1]))?;
    let count: usize = parts[2].parse().map_err(|e| format!("bad COUNT '{}': {e}", parts[2]))?;
    if !(r0 > 0.0) || !(factor > 1.0) || count == 0 {
        return Err("radii require R0 > 0, FACTOR > 1, COUNT >= 1".into());
    }
    Ok((r0, factor, count))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Analyze(args) = cli.command;

    let defaults = Config::default();
    let radii = match args.radii.as_deref().map(parse_radii).transpose() {
        Ok(r) => r.unwrap_or(defaults.radii),
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };

    let cfg = Config {
        input: args.file,
        json_out: args.json,
        check_nd: args.check_nd,
        bound: args.bound,
        compare_definitions: args.compare_definitions,
        numeric: args.numeric,
        export_systems: args.export_systems,
        translate: args.translate,
        seed: args.seed,
        tol: args.tol,
        radii,
        restarts: args.restarts.unwrap_or(defaults.restarts),
    };

    match run_pipeline(&cfg) {
        Ok(report) => {
            print!("{}", report.human);
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err) as u8)
        }
    }
}
