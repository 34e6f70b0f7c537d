//! `mallows-avoid`: reproducible runs of the constrained-Mallows toolkit.
//!
//! Subcommands: `sample` (tilted Markov chain), `limit` (closed-form limit
//! curves), `partition` (partition-function tables), `compare` (empirical
//! vs limit diagnostics), `validate` (exhaustive small-n suites).
//!
//! Every run emits a JSON metadata record holding all parameters; feeding
//! it back through `--config` reproduces the outputs byte-exactly (flags
//! override config values). Exit codes: 0 ok, 1 validation failure,
//! 2 usage, 3 I/O.

mod commands;
mod config;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "mallows-avoid", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a Mallows permutation conditioned to avoid a length-3 pattern.
    Sample(config::SampleArgs),
    /// Tabulate the closed-form limit curves and densities.
    Limit(config::LimitArgs),
    /// Partition-function table (and exact polynomials with --exact).
    Partition(config::PartitionArgs),
    /// Compare an empirical permutation against the limit objects.
    Compare(config::CompareArgs),
    /// Run the exhaustive small-n validation suites.
    Validate(config::ValidateArgs),
}

/// Errors carrying their process exit code.
pub enum CliError {
    Usage(String),
    Io(String),
}

impl From<mallows_avoid::Error> for CliError {
    fn from(e: mallows_avoid::Error) -> Self {
        match e {
            mallows_avoid::Error::Io(inner) => CliError::Io(inner.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() {
    if let Ok(value) = std::env::var("MALLOWS_AVOID_THREADS") {
        match value.parse::<usize>() {
            Ok(threads) if threads > 0 => {
                mallows_avoid::parallel::limit_threads(threads);
            }
            _ => {
                eprintln!("error: MALLOWS_AVOID_THREADS must be a positive integer");
                std::process::exit(2);
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sample(args) => commands::sample(args),
        Command::Limit(args) => commands::limit(args),
        Command::Partition(args) => commands::partition(args),
        Command::Compare(args) => commands::compare(args),
        Command::Validate(args) => commands::validate(args),
    };
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            std::process::exit(3);
        }
    }
}
