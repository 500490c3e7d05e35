mod args;
mod commands;
mod error;
mod input;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::{CliError, CliResult};
use report::Status;

const THREADS_VAR: &str = "LOCAL_SCORES_THREADS";

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Invalid(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Invalid(format!("cannot configure {n} threads: {e}")))
}

fn run(cli: Cli) -> CliResult<Status> {
    configure_threads()?;
    let outcome = commands::dispatch(&cli.command)?;
    report::write(&outcome.report, cli.output.as_deref())?;
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
