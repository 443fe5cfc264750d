//! The `recur` command-line front end.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] recur_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// How a successful run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    /// Some results are censored, ambiguous or failed their check.
    Partial,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Complete => 0,
            Outcome::Partial => 2,
        }
    }

    pub fn partial_if(cond: bool) -> Self {
        if cond {
            Outcome::Partial
        } else {
            Outcome::Complete
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "recur", version, about = "Return times of balls under linear maps of tori")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Serialize)]
pub struct Common {
    /// MapSpec JSON file, or one of: catmap, expanding, doubling, product.
    #[arg(long)]
    pub map: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Also write an SVG plot.
    #[arg(long)]
    #[serde(skip)]
    pub plot: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodArg {
    Exact,
    Sample,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lyapunov exponents: cocycle estimate against the exact spectrum.
    Exponents(commands::ExponentsArgs),
    /// Return time of one ball.
    ReturnTime(commands::ReturnTimeArgs),
    /// Return times over a geometric radius grid.
    Slope(commands::SlopeArgs),
    /// Recurrence dimension spectrum on a typical orbit.
    Spectrum(commands::SpectrumArgs),
    /// Covering time of the strip under the expanding example.
    Covering(commands::CoveringArgs),
    /// Periodic-point counts |det(A^p − I)|.
    Periodic(commands::PeriodicArgs),
    /// Cylinder return times of symbolic words.
    WordReturn(commands::WordReturnArgs),
    /// Sampled return time of a Bowen ball.
    Bowen(commands::BowenArgs),
    /// Summable envelope against sampled frequencies of early returns.
    BorelCantelli(commands::BorelCantelliArgs),
    /// Runs the acceptance suite.
    Verify(verify::VerifyArgs),
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(o) => o.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// Applies `RECUR_THREADS` (0 or unset = all cores) to the global pool.
fn configure_threads() -> Result<(), CliError> {
    let n = match std::env::var("RECUR_THREADS") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::Config(format!("RECUR_THREADS must be a count, got {v:?}")))?,
        Err(_) => 0,
    };
    if n > 0 {
        // A pool may already exist when called in-process; that is not an error.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Exponents(a) => commands::exponents(&a),
        Command::ReturnTime(a) => commands::return_time(&a),
        Command::Slope(a) => commands::slope(&a),
        Command::Spectrum(a) => commands::spectrum(&a),
        Command::Covering(a) => commands::covering(&a),
        Command::Periodic(a) => commands::periodic(&a),
        Command::WordReturn(a) => commands::word_return(&a),
        Command::Bowen(a) => commands::bowen(&a),
        Command::BorelCantelli(a) => commands::borel_cantelli(&a),
        Command::Verify(a) => verify::run_cli(&a),
    }
}
