use std::process::ExitCode;

use clap::Parser;

mod args;
mod error;
mod output;
mod path_cmd;
mod plot;
mod simulate;
mod source;
mod stability;
mod sweep;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate(a) => simulate::run(a, &cli.global),
        Command::Stability(a) => stability::run(a, &cli.global),
        Command::Sweep(a) => sweep::run(a, &cli.global),
        Command::Path(a) => path_cmd::run(a, &cli.global),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
