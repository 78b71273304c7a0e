//! The `lexnet` command line: corpus ingestion and generation, sub-network
//! extraction and every analysis, each writing a JSON report (plus CSV side
//! files for plot data) that embeds a run manifest.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 unreadable or
//! invalid data, 4 analysis failure.

mod args;
mod commands;
mod input;
mod output;
mod report_all;

use std::ffi::OsString;

use clap::Parser;

pub use args::Cli;
pub use output::{round9, RunManifest};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Compute(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

/// Analysis errors carry their module name through `lexnet::Error`.
pub(crate) fn compute<E: Into<lexnet::Error>>(e: E) -> CliError {
    CliError::Compute(e.into().to_string())
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit status. Diagnostics go to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.global.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| commands::execute(&cli)),
            Err(e) => Err(CliError::Usage(format!("cannot start {t} threads: {e}"))),
        },
        None => commands::execute(&cli),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
