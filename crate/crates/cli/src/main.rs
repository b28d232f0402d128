//! `chemoblow`: blow-up time bounds, radial simulation and verification.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config or spec error,
//! 3 Gagliardo–Nirenberg constant calibration failure.

use std::fs::File;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use chemoblow_core::diagnostics::EnergyRow;
use chemoblow_core::pipeline::{self, Failure};
use chemoblow_core::plot::{Chart, Series};
use chemoblow_core::report::to_json_string;
use chemoblow_core::{trace, RunConfig};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "chemoblow", version, about = "Blow-up time bounds for a nonlinear-diffusion chemotaxis system")]
struct Cli {
    /// Output directory; overrides `run.output_dir` from the config.
    #[arg(long, global = true, env = "CHEMOBLOW_OUTPUT_DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute exponents, constants and the blow-up time lower bounds.
    Bound { config: PathBuf },
    /// Run the radial simulation and write the trace.
    Simulate { config: PathBuf },
    /// Bound, simulate, and check the simulation against every estimate.
    Verify { config: PathBuf },
    /// Summarize and plot an existing trace CSV.
    Report { trace: PathBuf },
}

fn load(path: &Path, out: &Option<PathBuf>) -> Result<RunConfig, ExitCode> {
    match RunConfig::load(path) {
        Ok(mut cfg) => {
            if let Some(dir) = out {
                cfg.output_dir = dir.clone();
            }
            Ok(cfg)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Err(ExitCode::from(2))
        }
    }
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("error: {f}");
    if let Failure::Calibration(report) = &f {
        println!("{}", report.summary());
    }
    ExitCode::from(f.exit_code() as u8)
}

fn io_error(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}

#[derive(Serialize)]
struct TraceSummary {
    rows: usize,
    t_first: f64,
    t_last: f64,
    max_linf: f64,
    max_lp0: f64,
    phi_first: f64,
    phi_last: f64,
    max_relative_mass_drift: f64,
    clamped_mass_cum: f64,
}

fn summarize(rows: &[EnergyRow]) -> anyhow::Result<TraceSummary> {
    let (first, last) = rows.first().zip(rows.last()).context("trace has no rows")?;
    Ok(TraceSummary {
        rows: rows.len(),
        t_first: first.t,
        t_last: last.t,
        max_linf: rows.iter().map(|r| r.linf).fold(0.0, f64::max),
        max_lp0: rows.iter().map(|r| r.lp0).fold(0.0, f64::max),
        phi_first: first.phi,
        phi_last: last.phi,
        max_relative_mass_drift: rows
            .iter()
            .map(|r| (r.mass - r.clamped_mass_cum - first.mass).abs() / first.mass)
            .fold(0.0, f64::max),
        clamped_mass_cum: last.clamped_mass_cum,
    })
}

fn report(trace_path: &Path, out: &Path) -> anyhow::Result<()> {
    let file = File::open(trace_path).with_context(|| format!("opening {}", trace_path.display()))?;
    let rows = trace::read_trace(file)?;
    let summary = summarize(&rows)?;
    std::fs::create_dir_all(out)?;
    let linf = Chart::new("sup-norm of u", "t", "max u", true)
        .with(Series::new("max u", rows.iter().map(|r| (r.t, r.linf)).collect()));
    let phi = Chart::new("energy", "t", "Phi", true)
        .with(Series::new("Phi", rows.iter().map(|r| (r.t, r.phi)).collect()));
    std::fs::write(out.join("linf.svg"), linf.to_svg())?;
    std::fs::write(out.join("phi.svg"), phi.to_svg())?;
    let json = to_json_string(&summary)?;
    std::fs::write(out.join("summary.json"), &json)?;
    print!("{json}");
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Bound { config } => {
            let cfg = match load(config, &cli.out) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match pipeline::cmd_bound(&cfg) {
                Ok(r) => {
                    if let Err(e) = pipeline::write_bound_outputs(&cfg.output_dir, &r) {
                        return io_error(e);
                    }
                    println!("{}", r.summary());
                    ExitCode::SUCCESS
                }
                Err(f) => fail(f),
            }
        }
        Command::Simulate { config } => {
            let cfg = match load(config, &cli.out) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match pipeline::cmd_simulate(&cfg) {
                Ok(out) => {
                    if let Err(e) = pipeline::write_simulation_outputs(&cfg.output_dir, &out) {
                        return io_error(e);
                    }
                    println!("verdict: {:?}", out.outcome.verdict);
                    for c in &out.outcome.crossings {
                        println!("crossed {:e} at t = {:.10e}", c.threshold, c.t);
                    }
                    ExitCode::SUCCESS
                }
                Err(f) => fail(f),
            }
        }
        Command::Verify { config } => {
            let cfg = match load(config, &cli.out) {
                Ok(c) => c,
                Err(code) => return code,
            };
            match pipeline::cmd_verify(&cfg) {
                Ok(out) => {
                    if let Err(e) = pipeline::write_verify_outputs(&cfg.output_dir, &out) {
                        return io_error(e);
                    }
                    println!("{}", out.report.bound.summary());
                    println!("verdict: {:?}", out.report.simulation.verdict);
                    for c in &out.report.checks {
                        println!("{:<28} {:?} value={:e} tol={:e} {}", c.name, c.status, c.value, c.tolerance, c.detail);
                    }
                    if out.report.pass {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(f) => fail(f),
            }
        }
        Command::Report { trace } => {
            let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            match report(trace, &out) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => io_error(format!("{e:#}")),
            }
        }
    }
}
