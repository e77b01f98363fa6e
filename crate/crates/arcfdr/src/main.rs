use std::process::ExitCode;

use arcfdr::cli::{run, Cli};
use arcfdr::config::merge_config;
use clap::{CommandFactory, Parser};

fn main() -> ExitCode {
    let result =
        merge_config(std::env::args_os().collect(), &Cli::command()).and_then(|args| run(Cli::parse_from(args)));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
