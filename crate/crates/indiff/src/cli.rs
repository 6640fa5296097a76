//! Argument parsing and dispatch.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{self, CommandError, CommandOutput};
use crate::config::{ModeConfig, RunConfig};
use crate::report::{emit, Format};

#[derive(Debug, Parser)]
#[command(name = "indiff", version, about = "Minimal martingale measures and utility indifference prices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for report files; reports go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the oracle and risk seeds of the configuration.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides the martingale condition of the configuration.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeConfig>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Girsanov parameter per factor node.
    SolveMeasure,
    /// Information quantities per factor node.
    Info,
    /// Buyer and seller indifference prices.
    Price,
    /// Monte-Carlo verification and discrepancy ledger.
    Verify,
    /// GBM closed forms against the bridge oracle.
    GbmCompare,
    /// Convex risk measure axioms on random claims.
    Riskprops,
}

pub const EXIT_VERIFICATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Runs `command` on an already loaded configuration.
pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<CommandOutput, CommandError> {
    match command {
        Command::SolveMeasure => commands::solve_measure(cfg),
        Command::Info => commands::info(cfg),
        Command::Price => commands::price(cfg),
        Command::Verify => commands::verify(cfg),
        Command::GbmCompare => commands::gbm_compare(cfg),
        Command::Riskprops => commands::riskprops(cfg),
    }
}

pub fn run(cli: Cli) -> ExitCode {
    let Some(path) = cli.config.as_deref() else {
        eprintln!("error: --config is required");
        return ExitCode::from(EXIT_INPUT);
    };
    let mut cfg = match RunConfig::load(path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    cfg.override_with(cli.seed, cli.mode);
    let output = match dispatch(cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    if let Err(e) = emit(&output.tables, cli.format, cli.out.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_INPUT);
    }
    if output.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(EXIT_VERIFICATION)
    }
}
