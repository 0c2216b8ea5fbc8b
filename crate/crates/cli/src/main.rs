use std::process::ExitCode;

use clap::Parser;
use wehrl_cli::config::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match wehrl_cli::run(&cli, wehrl_cli::env_seed().as_deref()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}
