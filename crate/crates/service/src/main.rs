use std::process::ExitCode;

use clap::Parser;
use nl2domain_service::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}
