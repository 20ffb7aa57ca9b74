use anyhow::Result;
use clap::{Parser, Subcommand};
use dirtymac_cli::params::{GridArgs, SweepArgs, ValidateArgs};
use dirtymac_cli::{covgrid, sweep, validate};

/// Outage and coverage tables for a two-user dirty multiple-access channel
/// with copula-correlated Rayleigh fading.
#[derive(Parser)]
#[command(name = "dirtymac", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate outage probability against mean SNR or target rate (CSV).
    OutageSweep(SweepArgs),
    /// Map ergodic-sum-rate coverage regions over user distances (CSV).
    CoverageGrid(GridArgs),
    /// Run the seeded numerical self-check suites.
    Validate(ValidateArgs),
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::OutageSweep(args) => sweep::run(&args),
        Command::CoverageGrid(args) => covgrid::run(&args),
        Command::Validate(args) => validate::run(&args),
    }
}
