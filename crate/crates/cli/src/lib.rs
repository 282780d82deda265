//! Command-line front end for `fquant`.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;

mod config;
mod output;
mod run;

pub use config::{
    parse_args, Command, CuttingKind, OutputFormat, Params, PotentialKind, RunConfig, Units, Vary,
    DEFAULT_LEVELS, DEFAULT_REL_TOL,
};
pub use output::to_json;
pub use run::{run, Report};

/// Exit status for a solve that did not reach its tolerance.
pub const EXIT_NOT_CONVERGED: i32 = 3;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    /// `--help` or `--version` text; not a failure.
    #[error("{0}")]
    Help(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            _ => EXIT_USAGE,
        }
    }
}

/// Parses, runs and writes the result. Returns the process exit status.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let outcome = parse_args(argv).and_then(|config| {
        let report = run(&config)?;
        match config.output() {
            Some(path) => std::fs::write(path, &report.text)
                .map_err(|e| CliError::Io(format!("--output {}: {e}", path.display())))?,
            None => stdout
                .write_all(report.text.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))?,
        }
        if config.format() != OutputFormat::Json {
            for w in &report.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
        }
        Ok(report)
    });
    match outcome {
        Ok(report) if !report.converged => {
            let _ = writeln!(stderr, "error: solve did not converge");
            EXIT_NOT_CONVERGED
        }
        Ok(_) => 0,
        Err(CliError::Help(text)) => {
            let _ = stdout.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
