//! The `charter` command line: dataset generation, oracle simulation,
//! extraction, evaluation, ablation and overlays.
//!
//! Exit codes: 0 success, 1 usage, config or input error, 2 when some charts
//! of a batch failed (they are listed in the output manifest).

pub mod commands;
pub mod config;
pub mod dataset;
pub mod overlay;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};

use crate::commands::Source;
use crate::config::{Flags, Format, Settings};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("manifest mismatch: {0}")]
    Mismatch(String),
    #[error("io: {0}")]
    Io(String),
}

/// How a batch ended when no fatal error occurred.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Complete,
    Partial,
}

/// Appends timestamped lines to `run.log`. The only place timestamps go.
pub struct RunLog {
    path: PathBuf,
}

impl RunLog {
    pub fn open(dir: &Path) -> Result<Self, CliError> {
        let log = Self { path: dir.join("run.log") };
        std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&log.path)
            .map_err(|e| CliError::Io(format!("{}: {e}", log.path.display())))?;
        Ok(log)
    }

    pub fn line(&self, msg: &str) {
        let t = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default().as_secs_f64();
        if let Ok(mut f) = std::fs::OpenOptions::new().append(true).open(&self.path) {
            let _ = writeln!(f, "[{t:.3}] {msg}");
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "charter", version, about = "Synthetic chart data extraction harness")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML defaults file; flags override its values.
    #[arg(long, global = true, env = "CHARTER_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Charts per type.
    #[arg(long, global = true)]
    count: Option<usize>,
    /// Comma-separated chart types: vbar, hbar, pie, line, scatter.
    #[arg(long, global = true, value_delimiter = ',')]
    types: Option<Vec<String>>,
    /// clean, mild, harsh or the path of a noise TOML file.
    #[arg(long, global = true)]
    noise: Option<String>,
    /// Comma-separated relative-error bounds.
    #[arg(long, global = true, value_delimiter = ',')]
    epsilon: Option<Vec<f64>>,
    /// Comma-separated label-similarity thresholds.
    #[arg(long, global = true, value_delimiter = ',')]
    tau: Option<Vec<f64>>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render `--count` charts per type starting at `--seed`.
    Generate,
    /// Write simulated detector and OCR outputs for a dataset.
    Simulate {
        #[arg(long)]
        data: PathBuf,
    },
    /// Recover a table per chart.
    Extract {
        #[arg(long)]
        data: PathBuf,
        /// Simulate detector and OCR from ground truth with this preset or file.
        #[arg(long)]
        oracle: Option<String>,
        /// Directory of `<id>.det.json` / `<id>.ocr.json` (default: `<data>/oracle`).
        #[arg(long, conflicts_with = "oracle")]
        detections: Option<PathBuf>,
    },
    /// Score predictions against ground truth.
    Evaluate {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        pred: PathBuf,
    },
    /// Compare box and heatmap pie extraction on `--count` generated pies.
    Ablate,
    /// Draw recovered geometry over the chart images.
    Overlay {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, value_delimiter = ',')]
        ids: Option<Vec<String>>,
    },
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    let c = cli.common;
    let settings = Settings::resolve(Flags {
        config: c.config,
        seed: c.seed,
        count: c.count,
        types: c.types,
        noise: c.noise,
        epsilon: c.epsilon,
        tau: c.tau,
        out: c.out,
        jobs: c.jobs,
        format: c.format,
    })?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Generate => commands::generate_cmd(&settings),
        Command::Simulate { data } => commands::simulate_cmd(&settings, data),
        Command::Extract { data, oracle, detections } => {
            let source = match oracle {
                Some(name) => Source::Oracle(
                    name.clone(),
                    charter_oracle::NoiseConfig::resolve(name).map_err(|e| CliError::Config(e.to_string()))?,
                ),
                None => Source::Files(detections.clone().unwrap_or_else(|| data.join("oracle"))),
            };
            commands::extract_cmd(&settings, data, source)
        }
        Command::Evaluate { data, pred } => commands::evaluate_cmd(&settings, data, pred),
        Command::Ablate => commands::ablate_cmd(&settings),
        Command::Overlay { data, pred, ids } => commands::overlay_cmd(&settings, data, pred, ids.as_deref()),
    })
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Complete) => 0,
        Ok(Outcome::Partial) => {
            eprintln!("charter: some charts failed; see the failures in the output manifest");
            2
        }
        Err(e) => {
            eprintln!("charter: {e}");
            1
        }
    }
}
