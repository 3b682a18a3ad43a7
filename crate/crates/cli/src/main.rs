//! `tfps`: verification suites, evolution runs and wavepacket transforms for
//! the phase-space Schrodinger toolkit.
//!
//! Exit codes: 0 success, 1 failed checks or numerical errors, 2 usage,
//! configuration or input errors, 3 unwritable output.

mod commands;
mod config;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use config::ConfigError;
use verify::Suite;

#[derive(Parser)]
#[command(name = "tfps", version, about = "Phase-space Schrodinger toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run invariant suites and print a PASS/FAIL table.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        /// Scenario config; only the [grid] section is used.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Evolve the configured state and write snapshots plus manifest.csv.
    Evolve {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (created if missing).
        #[arg(long)]
        out: PathBuf,
        /// Omit the creation-time comment from dumps.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Wavepacket transform of a TFCFG dump (or its adjoint on a TFGRID dump).
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "gaussian")]
        window: Window,
        /// Apply the adjoint: phase-space dump in, configuration dump out.
        #[arg(long)]
        adjoint: bool,
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Window {
    /// `(pi hbar)^{-1/4} exp(-x^2 / 2 hbar)`.
    Gaussian,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Unwritable { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] tfps_core::Error),
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use tfps_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Input(_) => 2,
            CliError::Core(E::InvalidPlan(_) | E::InvalidGrid(_) | E::MalformedDump { .. }) => 2,
            CliError::Unwritable { .. } => 3,
            CliError::Core(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

fn load_config(path: Option<&PathBuf>) -> Result<config::Config, CliError> {
    Ok(match path {
        Some(p) => config::Config::load(p)?,
        None => config::Config::default(),
    })
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify { suite, config } => {
            let grid = load_config(config.as_ref())?.grid()?;
            let start = std::time::Instant::now();
            let checks = verify::run(suite, grid)?;
            verify::print_table(&checks);
            let failed = checks.iter().filter(|c| !c.passed()).count();
            println!(
                "{} of {} checks passed in {:.1} s (N = {}, Lx = {}, hbar = {})",
                checks.len() - failed,
                checks.len(),
                start.elapsed().as_secs_f64(),
                grid.n(),
                grid.lx(),
                grid.hbar()
            );
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
            Ok(())
        }
        Command::Evolve { config, out, no_timestamp } => {
            let cfg = load_config(config.as_ref())?;
            commands::evolve(&cfg, &out, !no_timestamp)
        }
        Command::Transform { input, out, window, adjoint, no_timestamp } => {
            commands::transform(&input, &out, window, adjoint, !no_timestamp)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            println!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
