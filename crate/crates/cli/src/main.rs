//! `circsym`: command-line front end of the verification pipeline.
//!
//! Exit status: 0 success, 1 input error, 2 scope or geometry error,
//! 3 numerical failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use circsym_core::ErrorKind;
use clap::Parser;

use args::Cli;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli.command) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Input => 1,
                ErrorKind::Scope => 2,
                ErrorKind::Numerical => 3,
            })
        }
    }
}
