// Copyright 2026 gkslcp Contributors
// SPDX-License-Identifier: Apache-2.0

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::CommonArgs;
use error::CliResult;

#[derive(Parser)]
#[command(name = "gkslcp")]
#[command(about = "Propagate GKSL-like memory kernels and certify complete positivity")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the dynamical maps on a grid
    Solve(CommonArgs),
    /// Certify complete positivity of a trajectory file, or of a fresh solve
    Certify {
        /// Trajectory file written by `solve`
        trajectory: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Scan the coupling strength and fit the log-log slope
    Gscan(CommonArgs),
    /// Search the anticommutator-only map for a non-CP witness
    Counterexample(CommonArgs),
    /// Run the convolution special case
    Convolution(CommonArgs),
    /// Check a configuration and its inputs without solving
    Validate(CommonArgs),
}

fn run(cli: Cli) -> CliResult<commands::Outcome> {
    match cli.command {
        Command::Solve(a) => commands::solve(&a.resolve()?),
        Command::Certify { trajectory, common } => {
            commands::certify_cmd(&common.resolve()?, trajectory.as_deref())
        }
        Command::Gscan(a) => commands::gscan(&a.resolve()?),
        Command::Counterexample(a) => commands::counterexample(&a.resolve()?),
        Command::Convolution(a) => commands::convolution(&a.resolve()?),
        Command::Validate(a) => commands::validate(&a.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(outcome) => {
            println!("{}", outcome.summary);
            ExitCode::from(outcome.exit as u8)
        }
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit as u8)
        }
    }
}
