mod args;
mod commands;
mod error;
mod grid;
mod input;
mod output;
mod seeds;

use std::io::{self, BufWriter};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use error::{CliError, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is_broken_pipe() => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lapprox: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let seed = if cli.seed.random_seed {
        let s = rand::random::<u64>();
        eprintln!("lapprox: seed {s}");
        s
    } else {
        cli.seed.seed
    };
    let out = BufWriter::new(io::stdout().lock());
    match &cli.command {
        Command::Search(a) => commands::search::run(a, seed, out),
        Command::Analyze(c) => commands::analyze::run(c, out),
        Command::Simulate(c) => commands::simulate::run(c, seed, out),
        Command::Experiment(c) => commands::experiment::run(c, seed, out),
    }
}
