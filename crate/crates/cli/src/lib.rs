//! The `direp` command-line tool.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use thiserror::Error;

pub mod args;
pub mod bench;
pub mod commands;
pub mod parse;
pub mod report;

use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Convergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Convergence(_) => EXIT_CONVERGENCE,
        }
    }

    /// Classify a library error, prefixing `context` (e.g. a row number).
    pub fn from_core(err: direp_core::Error, context: &str) -> Self {
        let msg = if context.is_empty() {
            err.to_string()
        } else {
            format!("{context}: {err}")
        };
        if err.is_convergence_failure() {
            CliError::Convergence(msg)
        } else {
            CliError::Input(msg)
        }
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Input(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Parse `argv`, run the subcommand and return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (result, output) = match &cli.command {
        Command::Ep(a) => (commands::cmd_ep(a), a.common.output.as_deref()),
        Command::Agglom(a) => (commands::cmd_agglom(a), a.common.output.as_deref()),
        Command::Poll(a) => (commands::cmd_poll(a), a.common.output.as_deref()),
        Command::Bms(a) => (commands::cmd_bms(a), a.common.output.as_deref()),
        Command::Bench(a) => (bench::cmd_bench(a), a.common.output.as_deref()),
    };
    match result.and_then(|text| emit(&text, output)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
