//! The `morsekit` command line: argument parsing, dispatch and exit codes.
//!
//! Exit status is 0 on success, 1 on a validation error (bad flags, sizes,
//! labels or ring/kind mismatch) and 2 on a numerical failure (degenerate
//! Hessian, non-convergent flow, failed check).

mod args;
mod commands;
mod render;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub use args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] morsekit::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use morsekit::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                E::NoConvergence { .. }
                | E::Singular
                | E::BasinEscape { .. }
                | E::Degenerate { .. }
                | E::Ambiguous { .. }
                | E::SamplerExhausted(_)
                | E::FrameDeficiency { .. }
                | E::NotInSpan(_)
                | E::NotIntegral(_) => 2,
                _ => 1,
            },
        }
    }
}

/// Output of a successful command; `failed` marks a check that ran to
/// completion but did not hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub body: String,
    pub failed: bool,
}

/// Parse `argv` (program name first), execute, and return the exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    0
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    1
                }
            };
        }
    };
    match commands::execute(&cli.command) {
        Ok(report) => {
            let _ = out.write_all(report.body.as_bytes());
            if !report.body.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            if report.failed {
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
