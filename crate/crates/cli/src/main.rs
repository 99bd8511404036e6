mod args;
mod enclose;
mod flatness;
mod report;
mod volterra;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};

const INPUT_ERROR: u8 = 1;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Enclose(a) => enclose::run(a),
        Command::Volterra(a) => volterra::run(a),
        Command::Flatness(a) => flatness::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
