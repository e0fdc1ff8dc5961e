//! `idsample`: preprocess labeled traffic datasets, draw representative or
//! balanced samples, and check them against their source.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use idsample_core::ErrorClass;

#[derive(Debug, Parser)]
#[command(name = "idsample", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, encode, deduplicate and drop constant columns.
    Preprocess(commands::preprocess::PreprocessArgs),
    /// Draw a sample whose traffic-type mix matches the input.
    Sample(commands::sample::SampleCmdArgs),
    /// Keep the minority binary class and sample the majority down to match.
    Balance(commands::sample::BalanceArgs),
    /// Z-test a sample against its source, per feature and per PCA coordinate.
    Validate(commands::validate::ValidateArgs),
    /// PCA variance summaries, point clouds and scatter plots.
    Report(commands::report::ReportArgs),
}

/// Exit status for a failed run.
fn exit_code(err: &anyhow::Error) -> u8 {
    let class = err
        .chain()
        .find_map(|e| e.downcast_ref::<idsample_core::Error>())
        .map_or(ErrorClass::Input, idsample_core::Error::class);
    match class {
        ErrorClass::Input => 3,
        ErrorClass::AcceptanceLoop => 4,
        ErrorClass::SchemaMismatch => 5,
        ErrorClass::Numerical => 6,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Preprocess(a) => commands::preprocess::run(a),
        Command::Sample(a) => commands::sample::run_sample(a),
        Command::Balance(a) => commands::sample::run_balance(a),
        Command::Validate(a) => commands::validate::run(a),
        Command::Report(a) => commands::report::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
