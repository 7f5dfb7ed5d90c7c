//! `corrwitness`: runs correlation-witness scenarios from JSON configs and
//! replays seeded check suites.

mod config;
mod error;
mod report;
mod suite;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use corrwitness::witness::analyze;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::suite::SuiteName;

#[derive(Debug, Parser)]
#[command(name = "corrwitness", version, about = "Trace-distance witness of initial system-environment correlations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one scenario and write its trajectory, bounds and verdict.
    Run {
        /// JSON scenario config.
        #[arg(long)]
        config: PathBuf,
        /// Output file, written once the analysis has finished.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a seeded check suite; exits 1 if any check fails.
    Suite {
        #[arg(value_enum)]
        name: SuiteName,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random cases per check; each suite has its own default.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        cases: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn run(config: &Path, out: &Path, format: Format) -> Result<(), CliError> {
    let scenario = ScenarioConfig::load(config)?.into_scenario()?;
    let report = analyze(&scenario.rho1, &scenario.rho2, &scenario.evolution, &scenario.grid, scenario.tolerance)?;
    let text = match format {
        Format::Csv => report::to_csv(&report),
        Format::Json => report::to_json(&report),
    };
    std::fs::write(out, text).map_err(|source| CliError::Write { path: out.to_owned(), source })
}

fn run_suite(name: SuiteName, seed: u64, cases: Option<u64>) -> ExitCode {
    let cases = cases.map_or(name.default_cases(), |c| c as usize);
    match suite::run(name, seed, cases) {
        Ok(checks) => {
            let lines: Vec<String> = checks.iter().map(ToString::to_string).collect();
            println!("{}", lines.join("\n"));
            let failed = checks.iter().filter(|c| !c.passed).count();
            println!("{} of {} checks passed (seed {seed})", checks.len() - failed, checks.len());
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            eprintln!("FAIL numerical error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, out, format } => match run(&config, &out, format) {
            Ok(()) => ExitCode::SUCCESS,
            Err(err) => {
                eprintln!("error: {err}");
                ExitCode::from(err.exit_code())
            }
        },
        Command::Suite { name, seed, cases } => run_suite(name, seed, cases),
    }
}
