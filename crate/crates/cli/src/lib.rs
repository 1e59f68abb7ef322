//! Library side of the `pll` command-line tool.
//!
//! Exit codes: 0 success, 1 analysis or validation failure, 2 usage error.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod config;
pub mod report;

use args::{Cli, Command, OutputArgs};
use report::Report;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad or missing input.
    Usage(String),
    /// The computation or a validation check failed.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<pll_core::Error> for CliError {
    fn from(e: pll_core::Error) -> Self {
        use pll_core::Error::*;
        match e {
            Domain { .. } | Incompatible { .. } | Grid(_) => CliError::Usage(e.to_string()),
            Truncation { .. } | Objective { .. } => CliError::Failure(e.to_string()),
        }
    }
}

/// What a command produced: the report plus an optional failure that still
/// lets the report be written (validation runs).
pub struct Outcome {
    pub report: Report,
    pub failure: Option<CliError>,
}

impl From<Report> for Outcome {
    fn from(report: Report) -> Self {
        Self {
            report,
            failure: None,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("PLL_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("PLL_THREADS must be a positive integer, got `{v}`")))?;
    // A second call in the same process (tests) keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn emit(outcome: &Outcome, output: &OutputArgs) -> Result<(), CliError> {
    let text = outcome.report.render(output.json)?;
    match &output.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Failure(format!("stdout: {e}")))
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let (outcome, output) = match cli.command {
        Command::Linkbudget(a) => (commands::linkbudget::run(&a)?, a.output),
        Command::Pie(a) => (commands::pie::run(&a)?, a.output),
        Command::Sweep(a) => (commands::sweep::run(&a)?, a.output),
        Command::Table2(a) => (commands::table::run(&a)?, a.output),
        Command::McValidate(a) => (commands::mc::run(&a)?, a.output),
    };
    emit(&outcome, &output)?;
    match outcome.failure {
        Some(f) => Err(f),
        None => Ok(()),
    }
}

/// Runs the tool on `args` (including the program name) and returns the
/// process exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let result = configure_threads()
        .and_then(|_| config::expand(args))
        .and_then(|args| match Cli::try_parse_from(args) {
            Ok(cli) => dispatch(cli),
            Err(e) => {
                // --help and --version land here with exit code 0.
                let _ = e.print();
                if e.exit_code() == 0 {
                    Ok(())
                } else {
                    Err(CliError::Usage(String::new()))
                }
            }
        });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string();
            if !msg.is_empty() {
                eprintln!("error: {msg}");
            }
            e.exit_code()
        }
    }
}
