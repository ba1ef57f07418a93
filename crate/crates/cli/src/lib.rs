//! The `commat` command line.
//!
//! [`run`] parses arguments, computes, writes one record per requested value
//! and returns the process exit code: 0 success, 1 usage error, 2 refusal
//! (budget, precision, pole proximity), 3 inconsistency or failed verification.

pub mod args;
mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use output::{Format, OutputRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

/// Environment variable holding the default brute-force budget.
pub const BUDGET_ENV: &str = "COMMAT_BUDGET";

/// Runs the CLI, reading the budget default from the process environment.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(argv, std::env::var(BUDGET_ENV).ok(), out, err)
}

/// Like [`run`], with the `COMMAT_BUDGET` value passed explicitly.
pub fn run_with_env<I, T>(
    argv: I,
    env_budget: Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match commands::execute(cli.command, env_budget, out) {
        Ok(code) => code,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}
