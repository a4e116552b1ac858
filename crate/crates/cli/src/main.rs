//! `scalecalc`: spectra, growth functions and fractal scale spaces.
//!
//! Exit status is 0 on success (or an isomorphic verdict), 1 on a failed
//! verification, a non-isomorphic verdict or a runtime error, and 2 on a
//! usage error.

mod args;
mod commands;
mod output;
mod specs;
mod verify;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Failure(e.to_string())
            }
        }
    )*};
}

failure_from!(
    io::Error,
    csv::Error,
    serde_json::Error,
    scalecalc_core::SpectralError,
    scalecalc_core::GrowthError,
    scalecalc_core::ScaleError,
    scalecalc_core::FourierError
);

/// What a successful command reports beyond its output.
pub enum Status {
    Ok,
    /// Completed, but the answer is negative (exit 1).
    Negative,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = (|| {
        let mut out: Box<dyn Write> = match &cli.output {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let status = commands::run(&cli, &mut out)?;
        out.flush()?;
        Ok::<_, CliError>(status)
    })();
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
