//! The `hotkit` command line: construction, evaluation, simulation and a
//! read-only browsing server.

pub mod adapt;
pub mod args;
pub mod construct;
pub mod evaluate;
pub mod serve;
pub mod simulate;

use std::fmt;
use std::io;

pub use args::{Cli, Command};

/// Exit status for a failed run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    /// Bad arguments, config or input files.
    Usage = 1,
    /// A provider or the network was unavailable.
    Environment = 2,
}

/// Socket could not be bound.
#[derive(Debug)]
pub struct BindError {
    pub addr: String,
    pub source: io::Error,
}

impl fmt::Display for BindError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot bind {}: {}", self.addr, self.source)
    }
}

impl std::error::Error for BindError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

pub fn exit_code(err: &anyhow::Error) -> ExitCode {
    for cause in err.chain() {
        if cause.is::<BindError>() || cause.is::<hotkit_core::ProviderError>() {
            return ExitCode::Environment;
        }
        if let Some(hotkit_core::Error::Provider { .. }) = cause.downcast_ref() {
            return ExitCode::Environment;
        }
    }
    ExitCode::Usage
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Construct(a) => construct::run(&a),
        Command::Evaluate(a) => evaluate::run(&a),
        Command::Serve(a) => serve::run(&a),
        Command::Simulate(a) => simulate::run(&a),
        Command::AdaptMultihop(a) => adapt::run(&a),
    }
}
