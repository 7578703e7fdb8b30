//! kdom: command-line front end for the kdominant toolkit.
//!
//! Wires the samplers, skyline algorithms, exact formulas, asymptotic
//! predictors, and the Monte Carlo harness into reproducible experiments.
//! Every run that writes a file also writes a manifest recording the exact
//! argv and seed; replaying them regenerates the outputs byte for byte, for
//! any worker count.

mod cmds;
mod out;
mod tables;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use kdominant::mc::{EstimateOptions, DEFAULT_WORK_LIMIT};
use thiserror::Error;

/// Errors surfaced to the shell. Validation and I/O problems exit with 2; a
/// refusal to exceed the work ceiling exits with 3 so scripts can tell an
/// oversized request from a malformed one.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] kdominant::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Lib(kdominant::Error::WorkLimit { .. }) => ExitCode::from(3),
            _ => ExitCode::from(2),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "kdom",
    version,
    about = "k-dominant skylines: sampling, exact and asymptotic expectations, Monte Carlo",
    after_help = "Seed resolution: --seed, else the KDOM_SEED environment variable, else 0. \
                  Equal seeds give byte-identical outputs for any --workers count."
)]
struct Cli {
    /// Master RNG seed (fallback: KDOM_SEED, then 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Significant decimal digits when rendering numbers into CSV cells.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
    /// Directory that relative output paths land in.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Lift the work ceiling that makes oversized Monte Carlo jobs exit 3.
    #[arg(long, global = true)]
    force: bool,
    /// Worker threads for Monte Carlo trials (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Draw a dataset from one of the four models and write it as CSV.
    Sample(cmds::SampleArgs),
    /// Compute k-dominant skylines of a CSV dataset for a list of k.
    Skyline(cmds::SkylineArgs),
    /// Monte Carlo estimate of a dominance statistic under a model.
    Estimate(cmds::EstimateArgs),
    /// Evaluate one closed-form predictor at given parameters.
    Predict(cmds::PredictArgs),
    /// Dimension thresholds: evaluate at one n or list exact boundaries.
    Threshold(cmds::ThresholdArgs),
    /// Regenerate a reference table as CSV with a comparison report.
    Table(tables::TableArgs),
}

/// Per-run context every subcommand receives: resolved seed, rendering
/// precision, output directory, and the raw argv for the manifest.
pub struct Ctx {
    pub seed: u64,
    pub seed_source: &'static str,
    pub precision: usize,
    pub out_dir: PathBuf,
    pub force: bool,
    pub argv: Vec<String>,
    pub started: Instant,
}

impl Ctx {
    /// The Monte Carlo work ceiling for this run.
    pub fn work_limit(&self) -> u128 {
        if self.force {
            u128::MAX
        } else {
            DEFAULT_WORK_LIMIT
        }
    }

    pub fn estimate_options(&self) -> EstimateOptions {
        EstimateOptions {
            work_limit: self.work_limit(),
            keep_values: false,
        }
    }

    /// Relative output paths land in --out-dir; absolute ones are kept.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.out_dir.join(path)
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> CliResult<(u64, &'static str)> {
    if let Some(seed) = flag {
        return Ok((seed, "cli-flag"));
    }
    match std::env::var("KDOM_SEED") {
        Ok(raw) => raw.trim().parse().map(|s| (s, "env")).map_err(|_| {
            CliError::Usage(format!(
                "KDOM_SEED must be an unsigned 64-bit integer, got '{raw}'"
            ))
        }),
        Err(_) => Ok((0, "default")),
    }
}

fn run(cli: Cli, argv: Vec<String>) -> CliResult<()> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot configure {workers} workers: {e}")))?;
    }
    let (seed, seed_source) = resolve_seed(cli.seed)?;
    let ctx = Ctx {
        seed,
        seed_source,
        precision: cli.precision.max(1),
        out_dir: cli.out_dir,
        force: cli.force,
        argv,
        started: Instant::now(),
    };
    match cli.cmd {
        Cmd::Sample(args) => cmds::sample(&ctx, &args),
        Cmd::Skyline(args) => cmds::skyline(&ctx, &args),
        Cmd::Estimate(args) => cmds::estimate(&ctx, &args),
        Cmd::Predict(args) => cmds::predict(&args),
        Cmd::Threshold(args) => cmds::threshold(&args),
        Cmd::Table(args) => tables::run(&ctx, &args),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if matches!(&err, CliError::Lib(kdominant::Error::WorkLimit { .. })) {
                eprintln!("hint: lower --trials or --n, or pass --force to lift the ceiling");
            }
            err.exit_code()
        }
    }
}
