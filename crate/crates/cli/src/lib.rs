//! Command-line front end for `wehrl-core`.

pub mod commands;
pub mod config;
pub mod error;
pub mod fspec;
pub mod output;
pub mod state;

use config::{Cli, SEED_ENV};
use error::CliResult;

/// Resolve, run and emit one invocation. Returns whether every check passed.
pub fn run(cli: &Cli, env_seed: Option<&str>) -> CliResult<bool> {
    let config = config::resolve(cli.command.kind(), cli.command.params(), env_seed)?;
    let report = commands::run(&config)?;
    output::emit(&config, &report)?;
    Ok(report.passed)
}

/// Read the seed variable from the process environment.
pub fn env_seed() -> Option<String> {
    std::env::var(SEED_ENV).ok()
}
