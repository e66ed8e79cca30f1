//! `qwt`: verification, simulation, gate counting, export and plot data for
//! quantum wavelet transform circuits.

mod commands;
mod options;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use options::{Cli, Command};

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and did not pass (exit 1).
    Verification(String),
    /// Bad flags, files or configuration (exit 2).
    Usage(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.into())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(a) => verify::run(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Count(a) => commands::count(a),
        Command::PlotData(a) => commands::plot_data(a),
        Command::Export(a) => commands::export(a),
        Command::Import(a) => commands::import(a),
    };
    match result {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification(text)) => {
            print!("{text}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
