mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::config::ScheduleConfig;
use crate::error::CliError;
use crate::output::Format;

/// Congruence-surface length spectra and convergence criteria.
#[derive(Debug, Parser)]
#[command(name = "pinch", version)]
struct Cli {
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,

    /// Record wall-clock time in the JSON meta block (output is then no
    /// longer byte-reproducible).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact level data of X(N) and X_t(N) for a range of levels.
    Survey {
        #[arg(long)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
    },
    /// Search Γ(N) for hyperbolic traces below the systole trace N² − 2.
    Systole {
        #[arg(long)]
        level: u64,
        /// Largest absolute matrix entry searched (default 10·N²).
        #[arg(long)]
        entry_bound: Option<u64>,
    },
    /// Evaluate both convergence criteria along a schedule.
    Schedule {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        radius: f64,
        #[arg(long)]
        j_max: usize,
    },
    /// Check the Plancherel identity for bump test functions.
    TraceCheck {
        /// Comma-separated support bounds S.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        supports: Vec<f64>,
        #[arg(long)]
        tol: f64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Survey { .. } => "survey",
            Command::Systole { .. } => "systole",
            Command::Schedule { .. } => "schedule",
            Command::TraceCheck { .. } => "trace-check",
        }
    }
}

fn run(cli: &Cli) -> Result<Option<String>, CliError> {
    let started = Instant::now();
    let outcome = match &cli.command {
        Command::Survey { n_min, n_max } => commands::survey(*n_min, *n_max)?,
        Command::Systole { level, entry_bound } => commands::systole(*level, *entry_bound)?,
        Command::Schedule {
            config,
            radius,
            j_max,
        } => commands::schedule(&ScheduleConfig::load(config)?, *radius, *j_max)?,
        Command::TraceCheck { supports, tol } => commands::trace_check(supports, *tol)?,
    };
    let elapsed = started.elapsed().as_secs_f64();
    let mut meta = json!({
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command.name(),
        "config": outcome.config,
    });
    if cli.timing {
        meta["wall_clock_seconds"] = json!(elapsed);
    }
    let bytes = output::render(&outcome.table, cli.format, &meta)?;
    match &cli.out {
        Some(path) => output::write_atomic(path, &bytes)?,
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            })?,
    }
    eprintln!("{}: {elapsed:.3} s", cli.command.name());
    Ok(outcome.failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("pinch: check failed: {failure}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("pinch: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
