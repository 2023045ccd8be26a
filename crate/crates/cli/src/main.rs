//! `coinv`: exact computations in lattice Heisenberg modules, their Virasoro
//! structures, and coinvariant spaces cut out by outgoing function spans.
//!
//! Exit codes: 0 success, 2 configuration problem, 3 insufficient
//! truncation or margins, 4 violated invariant (the report carries a
//! witness).

mod args;
mod commands;
mod config;
mod emit;
mod parallel;

use std::process::ExitCode;

use clap::Parser;
use coinv_core::Error;

/// Anything that stops a run before a verdict can be reached.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Config(String),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(err) => write!(f, "{err}"),
            Failure::Config(msg) => write!(f, "{msg}"),
        }
    }
}

impl Failure {
    /// 3 when a larger window or margin would fix the run, 2 otherwise.
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(err) => match err {
                Error::TruncationInsufficient { .. }
                | Error::MarginTooSmall(_)
                | Error::GapSetIncomplete { .. }
                | Error::RankDeficient { .. } => 3,
                _ => 2,
            },
            Failure::Config(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
