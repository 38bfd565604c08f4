use std::fmt;
use std::process::ExitCode;

use clap::Parser;

mod commands;
mod config;
mod verify;

use config::{Cli, Command};

/// Failure classes mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    Verification(String),
    Input(String),
    Resource(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Resource(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Resource(m) => write!(f, "resource limit: {m}"),
        }
    }
}

impl From<hyperlat::Error> for CliError {
    fn from(e: hyperlat::Error) -> Self {
        use hyperlat::Error as E;
        match e {
            E::Resource(_) => CliError::Resource(e.to_string()),
            E::Verification(_) | E::Internal(_) | E::Solver(_) => {
                CliError::Verification(e.to_string())
            }
            E::Domain(_) | E::Unsupported(_) | E::Lookup { .. } | E::Io(_) | E::Json(_) => {
                CliError::Input(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Generate(args) => commands::generate(&args),
        Command::Spectrum(args) => commands::spectrum(&args),
        Command::Verify(args) => verify::run(&args),
        Command::Growth(args) => commands::growth(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hyperlat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
