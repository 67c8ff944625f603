//! Command-line front end: validate schedules, rank candidates by total
//! risk, export baseline curves, and generate candidates with priority
//! rules.
//!
//! Exit codes: 0 success, 1 infeasible schedule or empty ranking, 2 input
//! or configuration error.

mod commands;
mod config;

use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{cmd_curve, cmd_rank, cmd_sgs, cmd_validate, file_label, load, Loaded, Status};
pub use config::{RunArgs, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "schedrisk",
    version,
    about = "Schedule risk baselines for project schedules"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check schedules against precedence, capacity and arrival dates.
    Validate(RunArgs),
    /// Rank candidate schedules by SRV.
    Rank(RunArgs),
    /// Baseline curve of a single schedule.
    Curve(RunArgs),
    /// Generate candidate schedules with priority rules.
    Sgs(RunArgs),
}

pub fn run_config(
    command: &Command,
    config: &RunConfig,
    out: &mut dyn Write,
) -> anyhow::Result<Status> {
    match command {
        Command::Validate(_) => cmd_validate(config, out),
        Command::Rank(_) => cmd_rank(config, out),
        Command::Curve(_) => cmd_curve(config, out),
        Command::Sgs(_) => cmd_sgs(config, out),
    }
}

/// Runs a parsed command and returns the process exit code. Errors go to
/// standard error.
pub fn run(cli: &Cli, out: &mut dyn Write) -> i32 {
    let args = match &cli.command {
        Command::Validate(a) | Command::Rank(a) | Command::Curve(a) | Command::Sgs(a) => a,
    };
    let result = args
        .resolve()
        .and_then(|config| run_config(&cli.command, &config, out));
    match result {
        Ok(status) => status as i32,
        Err(e) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
