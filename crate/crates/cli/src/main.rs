//! `cabound`: covering array number bounds, parameter sweeps, constructions,
//! and verification from the command line.
//!
//! Exit codes: 0 success, 1 verification-negative, 2 usage/validation/parse,
//! 3 construction budget exhausted.

mod commands;

use clap::{Parser, Subcommand};

use commands::{bounds, construct, max_lambda, sweep, verify};

#[derive(Parser)]
#[command(
    name = "cabound",
    version,
    about = "Covering array bounds and constructions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate upper bounds on the covering array number
    Bounds(bounds::Args),
    /// Sweep bounds over a range of column counts into a CSV file
    Sweep(sweep::Args),
    /// Build a covering array and verify it
    Construct(construct::Args),
    /// Verify coverage of an array file
    Verify(verify::Args),
    /// Largest guaranteed coverage index at a fixed row count
    MaxLambda(max_lambda::Args),
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Bounds(args) => bounds::run(&args),
        Command::Sweep(args) => sweep::run(&args),
        Command::Construct(args) => construct::run(&args),
        Command::Verify(args) => verify::run(&args),
        Command::MaxLambda(args) => max_lambda::run(&args),
    };
    std::process::exit(code);
}
