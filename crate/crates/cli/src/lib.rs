//! Command-line front end: factor tables, spline samples, validation suites
//! and the figure data for the `N = 9`, `r = 1` cardinal splines.

mod commands;
pub mod config;
pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{Format, RunConfig};

/// Environment variable that overrides `m_max`.
pub const MMAX_VAR: &str = "TRIGSPLINE_MMAX";

pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Unreadable input: a bad config, sample file, flag or environment value.
#[derive(Debug)]
pub struct ParseFailure(pub String);

impl std::fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn parse_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(ParseFailure(msg.into()))
}

impl std::error::Error for ParseFailure {}

/// Marks a failed invariant suite.
#[derive(Debug)]
pub struct ValidationFailure(pub Vec<String>);

impl std::fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "failed suites: {}", self.0.join(", "))
    }
}

impl std::error::Error for ValidationFailure {}

#[derive(Debug, Parser)]
#[command(name = "trigspline", version, about = "Trigonometric fundamental and interpolation splines")]
struct Cli {
    /// JSON run configuration; defaults to the figure setup.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (a directory for `figures`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Number of t samples, or the largest j for `factors`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Center index k.
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Truncation target.
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tabulate the convergence factor and its tail envelope for j = 1..J.
    Factors,
    /// Sample st_k on a uniform grid of [0, 2π).
    Fundamental,
    /// Evaluate the interpolation spline through samples read from a CSV file.
    Interpolate {
        /// CSV with header `k,f` and one row per node.
        input: PathBuf,
    },
    /// Run the invariant suites and print a pass/fail table.
    Validate,
    /// Write the four st_5 curves for N = 9, r = 1.
    Figures,
}

fn settings(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(f) = cli.format {
        cfg.format = f;
    }
    if let Some(s) = cli.samples {
        cfg.samples = s;
    }
    if let Some(k) = cli.k {
        cfg.k = k;
    }
    if let Some(e) = cli.epsilon {
        cfg.spline.truncation.epsilon = e;
    }
    if let Ok(v) = std::env::var(MMAX_VAR) {
        cfg.spline.truncation.m_max = v.trim().parse().map_err(|e| parse_error(format!("{MMAX_VAR}={v:?}: {e}")))?;
    }
    cfg.spline
        .validate()
        .map_err(|e| parse_error(format!("config error: {e}")))?;
    Ok(cfg)
}

/// Exit code for a failed run.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.chain().any(|e| e.is::<ParseFailure>()) {
        EXIT_PARSE
    } else if err.chain().any(|e| e.is::<trigspline::Error>()) {
        EXIT_NUMERIC
    } else {
        EXIT_VALIDATION
    }
}

/// Runs one command line and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { 0 };
        }
    };
    let result = settings(&cli).and_then(|cfg| match &cli.command {
        Command::Factors => commands::factors(&cfg),
        Command::Fundamental => commands::fundamental(&cfg),
        Command::Interpolate { input } => commands::interpolate(&cfg, input),
        Command::Validate => commands::validate(&cfg),
        Command::Figures => commands::figures(&cfg),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code(&e)
        }
    }
}
