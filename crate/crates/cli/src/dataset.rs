//! On-disk layout of datasets, oracle outputs and predictions.

use std::path::{Path, PathBuf};

use charter_core::{ChartType, Raster};
use charter_synth::GroundTruth;
use serde::{Deserialize, Serialize};

use crate::config::sha256_hex;
use crate::CliError;

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;
pub const MANIFEST: &str = "manifest.json";

/// One chart of a dataset. Paths are relative to the manifest's directory.
/// Only `id` and `image` are required; `det`/`ocr` let a dataset carry
/// external detector and OCR outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart_type: Option<ChartType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub image: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gt: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ocr: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub id: String,
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub schema_version: u32,
    #[serde(default)]
    pub config_hash: String,
    #[serde(default)]
    pub charts: Vec<ChartEntry>,
    #[serde(default)]
    pub failures: Vec<Failure>,
}

/// Written by `simulate` next to the detector and OCR files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleManifest {
    pub schema_version: u32,
    pub config_hash: String,
    pub dataset_hash: String,
    pub noise: charter_oracle::NoiseConfig,
    pub charts: Vec<String>,
    pub failures: Vec<Failure>,
}

/// Written by `extract`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionManifest {
    pub schema_version: u32,
    pub config_hash: String,
    pub dataset_hash: String,
    /// Noise preset or file when the oracle ran in-process, else `null`.
    pub oracle: Option<String>,
    pub tables: Vec<String>,
    pub failures: Vec<Failure>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))? + "\n";
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A dataset directory with its manifest and the manifest's hash.
pub struct Dataset {
    pub dir: PathBuf,
    pub manifest: DatasetManifest,
    pub hash: String,
}

impl Dataset {
    pub fn open(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(MANIFEST);
        let bytes = std::fs::read(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let manifest: DatasetManifest =
            serde_json::from_slice(&bytes).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        if manifest.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(CliError::Input(format!("{}: unsupported schema_version", path.display())));
        }
        let mut ids: Vec<&str> = manifest.charts.iter().map(|c| c.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Input(format!("{}: duplicate chart ids", path.display())));
        }
        Ok(Self { dir: dir.to_path_buf(), manifest, hash: sha256_hex(&bytes) })
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.dir.join(rel)
    }

    pub fn raster(&self, entry: &ChartEntry) -> Result<Raster, String> {
        let bytes = std::fs::read(self.path(&entry.image)).map_err(|e| format!("{}: {e}", entry.image))?;
        Raster::decode_png(&bytes).map_err(|e| format!("{}: {e}", entry.image))
    }

    pub fn truth(&self, entry: &ChartEntry) -> Result<GroundTruth, String> {
        let rel = entry.gt.as_ref().ok_or("no ground truth")?;
        let text = std::fs::read_to_string(self.path(rel)).map_err(|e| format!("{rel}: {e}"))?;
        GroundTruth::from_json(&text).map_err(|e| format!("{rel}: {e}"))
    }
}

/// Creates `dir` and checks that it accepts files.
pub fn prepare_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let probe = dir.join(".charter-write-test");
    std::fs::write(&probe, b"").map_err(|e| CliError::Io(format!("{} is not writable: {e}", dir.display())))?;
    let _ = std::fs::remove_file(probe);
    Ok(())
}

pub fn chart_id(chart_type: ChartType, seed: u64) -> String {
    format!("{chart_type}-{seed:06}")
}
