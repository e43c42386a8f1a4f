use std::process::ExitCode;

use bellnoise_cli::{execute, Args, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let result = RunConfig::from_args(Args::parse()).and_then(|config| execute(&config));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
