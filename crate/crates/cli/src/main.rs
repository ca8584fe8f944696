//! `teamgame`: simulations and spectral checks for the tug-of-war team game.

mod commands;
mod config;
mod error;
mod svg;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Cli, Command};
use error::CliResult;

fn run(cli: &Cli) -> CliResult<()> {
    let args = cli.command.args().resolve()?;
    match &cli.command {
        Command::Simulate(_) => commands::cmd_simulate(&args),
        Command::Branch(_) => commands::cmd_branch(&args),
        Command::Reverse(_) => commands::cmd_reverse(&args),
        Command::Spectrum(_) => commands::cmd_spectrum(&args),
        Command::GradientDemo(_) => commands::cmd_gradient_demo(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                // usage errors are configuration errors
                _ => ExitCode::from(3),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("teamgame {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
