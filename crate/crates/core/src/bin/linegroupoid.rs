use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand};

use linegroupoid::lorentz::Tolerances;
use linegroupoid::verify::commands::{decompose_command, quotient_command};
use linegroupoid::verify::{run_suites, ReportFormat, Suite, SuiteConfig, ToleranceTable};

#[derive(Parser)]
#[command(name = "linegroupoid", version, about = "Verification suites and tools for the Euclidean line groupoid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run numerical and exact verification suites.
    #[command(alias = "run-suites", alias = "run_suites")]
    Run {
        /// Sphere dimension.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Tolerance override NAME=VALUE.
        #[arg(long = "tol", value_name = "NAME=VALUE")]
        tol: Vec<String>,
        /// Restrict to a suite; repeatable. All suites run by default.
        #[arg(long = "suite", value_name = "NAME")]
        suite: Vec<Suite>,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: ReportFormat,
    },
    /// Quotient a finite groupoid by an automorphism action.
    Quotient {
        #[arg(long)]
        groupoid: PathBuf,
        #[arg(long)]
        action: PathBuf,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Both Iwasawa factorizations of a Lorentz matrix given as JSON rows.
    Decompose {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn usage_error(e: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, e).exit()
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { n, samples, seed, tol, suite, out, format } => {
            let mut tolerances = ToleranceTable::default();
            for t in &tol {
                tolerances.apply_override(t).unwrap_or_else(|e| usage_error(e));
            }
            let config = SuiteConfig { n, samples, seed, tolerances, ..Default::default() };
            let config = if suite.is_empty() { config } else { config.only(&suite) };
            let report = run_suites(&config).unwrap_or_else(|e| usage_error(e));
            emit(&report.render(format), out.as_deref())?;
            Ok(report.all_pass())
        }
        Command::Quotient { groupoid, action, out } => {
            let outcome = quotient_command(&read(&groupoid)?, &read(&action)?)?;
            emit(&(serde_json::to_string_pretty(&outcome)? + "\n"), out.as_deref())?;
            Ok(true)
        }
        Command::Decompose { matrix, tol, out } => {
            let tolerances = Tolerances { orth: tol, ..Default::default() };
            let d = decompose_command(&read(&matrix)?, &tolerances)?;
            emit(&(serde_json::to_string_pretty(&d)? + "\n"), out.as_deref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
