mod args;
mod commands;
mod config;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;
use nodal_core::Error;

use args::{Cli, Command};

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::InvalidConfig(_)
            | Error::OutOfDomain(_)
            | Error::UnresolvedPerturbation { .. }
            | Error::NotPrime(_)
            | Error::RelationNotSymmetric(_)
            | Error::TooManyNeighbors { .. }
            | Error::NoEigenpairsSelected => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn run(argv: Vec<OsString>) -> Result<(), Failure> {
    let argv = config::merge_config(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => return Err(Failure::Usage(e.render().to_string())),
        Err(e) => {
            print!("{}", e.render());
            return Ok(());
        }
    };
    let summary = match &cli.command {
        Command::Interval(a) => commands::interval(a),
        Command::Square(a) => commands::square(a),
        Command::RationalCheck(a) => commands::rational_check(a),
        Command::Paley(a) => commands::paley(a),
        Command::Torus(a) => commands::torus(a),
        Command::Graph(a) => commands::graph(a),
        Command::Synth(a) => commands::synth(a),
    }?;
    log::debug!("{} finished", cli.command.name());
    println!("{}", summary.line());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string();
            match e {
                Failure::Usage(_) if msg.starts_with("error:") => eprint!("{msg}"),
                _ => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}
