//! `gue-piv`: command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails (the
//! report is still written), 2 for usage and configuration errors.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;
use serde_json::Value;

use args::{Cli, Command};
use commands::UsageError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn config_of<T: serde::Serialize>(args: &T, cli: &Cli) -> Value {
    let mut v = serde_json::to_value(args).expect("args serialize");
    v["format"] = serde_json::to_value(cli.global.format).expect("format serializes");
    v
}

fn run(cli: &Cli) -> Result<bool, UsageError> {
    if let Some(n) = cli.global.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| UsageError(format!("cannot start {n} workers: {e}")))?;
    }
    let (name, config, outcome) = match &cli.command {
        Command::Moments(a) => ("moments", config_of(a, cli), commands::moments(a)?),
        Command::Recurrence(a) => ("recurrence", config_of(a, cli), commands::recurrence(a)?),
        Command::Verify(a) => ("verify", config_of(a, cli), commands::verify(a)?),
        Command::Genhermite(a) => ("genhermite", config_of(a, cli), commands::genhermite(a)?),
        Command::Hankel(a) => ("hankel", config_of(a, cli), commands::hankel(a)?),
        Command::Numeric(a) => ("numeric", config_of(a, cli), commands::numeric(a)?),
        Command::Mc(a) => ("mc", config_of(a, cli), commands::mc(a)?),
        Command::Suite(a) => ("suite", config_of(a, cli), commands::suite(a)?),
    };
    let body = output::render(name, &config, &outcome, cli.global.format).map_err(UsageError)?;
    let stored = output::emit(name, &config, &body, &cli.global).map_err(|e| UsageError(e.to_string()))?;
    eprintln!("{}", outcome.summary.line(name));
    if let Some(path) = stored {
        eprintln!("report: {}", path.display());
    }
    Ok(outcome.summary.all_pass())
}
