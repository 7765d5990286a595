//! Defaults file, flag merging and the config hash.

use std::path::{Path, PathBuf};

use charter_analysis::AnalysisConfig;
use charter_core::ChartType;
use charter_eval::DEFAULT_EPSILONS;
use charter_oracle::NoiseConfig;
use charter_synth::SynthConfig;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    #[default]
    Md,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Md => "md",
        }
    }
}

/// Contents of a defaults file (TOML). Every field is optional; flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub types: Option<Vec<String>>,
    pub noise: Option<String>,
    pub epsilon: Option<Vec<f64>>,
    pub tau: Option<Vec<f64>>,
    pub jobs: Option<usize>,
    pub format: Option<Format>,
    pub synth: Option<SynthConfig>,
    pub analysis: Option<AnalysisConfig>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

/// Values given on the command line.
#[derive(Debug, Clone, Default)]
pub struct Flags {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub count: Option<usize>,
    pub types: Option<Vec<String>>,
    pub noise: Option<String>,
    pub epsilon: Option<Vec<f64>>,
    pub tau: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub format: Option<Format>,
}

/// Effective settings after merging the defaults file and flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub seed: Option<u64>,
    pub count: usize,
    pub types: Vec<ChartType>,
    pub noise_name: String,
    pub noise: NoiseConfig,
    pub epsilons: Vec<f64>,
    pub taus: Vec<f64>,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub format: Format,
    pub synth: SynthConfig,
    pub analysis: AnalysisConfig,
}

/// The part of the settings that determines a command's artifacts.
#[derive(Serialize)]
struct Hashed<'a> {
    command: &'a str,
    seed: Option<u64>,
    count: usize,
    types: &'a [ChartType],
    noise: &'a NoiseConfig,
    epsilons: &'a [f64],
    taus: &'a [f64],
    synth: &'a SynthConfig,
    analysis: &'a AnalysisConfig,
    inputs: &'a [String],
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Settings {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let types = match flags.types.or(file.types) {
            None => ChartType::ALL.to_vec(),
            Some(names) => names
                .iter()
                .map(|n| {
                    ChartType::from_name(n.trim())
                        .ok_or_else(|| CliError::Usage(format!("unknown chart type {n:?} (vbar, hbar, pie, line, scatter)")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        let noise_name = flags.noise.or(file.noise).unwrap_or_else(|| "clean".into());
        let noise = NoiseConfig::resolve(&noise_name).map_err(|e| CliError::Config(e.to_string()))?;
        let epsilons = flags.epsilon.or(file.epsilon).unwrap_or_else(|| DEFAULT_EPSILONS.to_vec());
        if epsilons.is_empty() || epsilons.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(CliError::Usage(format!("--epsilon values must be positive, got {epsilons:?}")));
        }
        let taus = flags.tau.or(file.tau).unwrap_or_else(|| vec![1.0]);
        if taus.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(CliError::Usage(format!("--tau values must lie in [0, 1], got {taus:?}")));
        }
        let synth = file.synth.unwrap_or_default();
        synth.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self {
            seed: flags.seed.or(file.seed),
            count: flags.count.or(file.count).unwrap_or(10),
            types,
            noise_name,
            noise,
            epsilons,
            taus,
            out: flags.out,
            jobs: flags.jobs.or(file.jobs).unwrap_or(0),
            format: flags.format.or(file.format).unwrap_or_default(),
            synth,
            analysis: file.analysis.unwrap_or_default(),
        })
    }

    pub fn require_seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| CliError::Usage("--seed is required for this command".into()))
    }

    pub fn require_out(&self) -> Result<&Path, CliError> {
        self.out.as_deref().ok_or_else(|| CliError::Usage("--out is required for this command".into()))
    }

    /// SHA-256 of everything that shapes `command`'s output, plus the hashes
    /// of its input manifests. Paths, `--jobs` and `--format` are excluded.
    pub fn hash(&self, command: &str, inputs: &[String]) -> String {
        let h = Hashed {
            command,
            seed: self.seed,
            count: self.count,
            types: &self.types,
            noise: &self.noise,
            epsilons: &self.epsilons,
            taus: &self.taus,
            synth: &self.synth,
            analysis: &self.analysis,
            inputs,
        };
        sha256_hex(&serde_json::to_vec(&h).expect("settings serialize"))
    }
}
