//! `dpnl`: calibrate, sample, bound, verify and sweep noise mechanisms, and
//! answer noisy aggregate queries over CSV files.

mod args;
mod commands;
mod config;
mod ledger;
mod mech;
mod query;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

const EXIT_FAIL: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;

fn run() -> anyhow::Result<ExitCode> {
    let argv = config::merge_config(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return Ok(ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 }));
        }
    };
    match &cli.command {
        Command::Calibrate(a) => commands::calibrate(a)?,
        Command::Sample(a) => commands::sample(a)?,
        Command::Bounds(a) => commands::bounds(a)?,
        Command::Verify(a) => {
            if !commands::verify(a)? {
                return Ok(ExitCode::from(EXIT_FAIL));
            }
        }
        Command::Sweep(a) => commands::sweep(a)?,
        Command::Query(a) => query::run(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<query::BudgetExceeded>().is_some() {
                ExitCode::from(EXIT_BUDGET)
            } else {
                ExitCode::from(EXIT_ERROR)
            }
        }
    }
}
