//! `secondlang`: second-opinion language identification for pipelines.

mod bench;
mod common;
mod identify;
mod inspect;
mod train;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use common::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "secondlang",
    version,
    about = "Second-opinion language identification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Identify one sentence per stdin line; prints one code per line.
    Identify(identify::Args),
    /// Train an n-gram model from a `label<TAB>text` corpus.
    Train(train::Args),
    /// Score the identifier on gold-standard files.
    Bench(bench::Args),
    /// Show the loaded configuration or model.
    Inspect(inspect::Args),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Identify(args) => identify::run(args),
        Command::Train(args) => train::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Inspect(args) => inspect::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError { code, error }) => {
            eprintln!("error: {error}");
            ExitCode::from(code)
        }
    }
}
