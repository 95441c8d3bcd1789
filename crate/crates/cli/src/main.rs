//! Experiment runner for generalized elephant quantum walks.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::FileConfig;

#[derive(Parser)]
#[command(
    name = "geqw",
    about = "2-D discrete-time quantum walks with composite coins and q-exponential step disorder",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for output artifacts (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Override the configured base seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the configured number of disorder realizations.
    #[arg(long)]
    realizations: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a single disorder realization and write its observable records.
    Run(CommonArgs),
    /// Average observables and exponent fits over disorder realizations.
    Ensemble(CommonArgs),
    /// Fit the dynamical exponent across a list of q values.
    Sweep(CommonArgs),
    /// Cross-check the engines against independent implementations.
    Verify(CommonArgs),
}

fn load(args: &CommonArgs) -> Result<FileConfig, String> {
    let mut cfg = FileConfig::load(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.realizations {
        cfg.realizations = n;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => load(args).and_then(|cfg| commands::run(&cfg, &args.out)),
        Command::Ensemble(args) => {
            load(args).and_then(|cfg| commands::ensemble(&cfg, &args.out))
        }
        Command::Sweep(args) => load(args).and_then(|cfg| commands::sweep(&cfg, &args.out)),
        Command::Verify(args) => {
            load(args).and_then(|cfg| commands::verify(&cfg, &args.out))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
