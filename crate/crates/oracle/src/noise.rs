use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{OracleError, Result};

/// Corruption applied by the simulators. Sigmas are in raster pixels except
/// `heatmap_blur`, which is in heatmap pixels.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Standard deviation of independent Gaussian offsets on each box edge.
    pub box_jitter: f64,
    /// Scores are `1 - |N(0, score_sigma)|`, clamped to `[0, 1]`.
    pub score_sigma: f64,
    /// Chance that each element box spawns a spurious box of its category.
    pub false_positive_rate: f64,
    /// Chance that an element box is missed.
    pub false_negative_rate: f64,
    pub heatmap_blur: f64,
    /// Amplitude of uniform additive noise on every heatmap pixel.
    pub heatmap_speckle: f64,
    /// Per-character substitution probability (spaces are kept).
    pub ocr_substitution: f64,
    /// Per-token drop probability.
    pub ocr_drop: f64,
}

pub const PRESETS: [&str; 3] = ["clean", "mild", "harsh"];

impl NoiseConfig {
    pub fn clean() -> Self {
        Self::default()
    }

    pub fn validate(&self) -> Result<()> {
        let sigmas = [("box_jitter", self.box_jitter), ("score_sigma", self.score_sigma), ("heatmap_blur", self.heatmap_blur)];
        for (name, v) in sigmas {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(OracleError::InvalidNoise(format!("{name} = {v} must be a finite value >= 0")));
            }
        }
        let rates = [
            ("false_positive_rate", self.false_positive_rate),
            ("false_negative_rate", self.false_negative_rate),
            ("heatmap_speckle", self.heatmap_speckle),
            ("ocr_substitution", self.ocr_substitution),
            ("ocr_drop", self.ocr_drop),
        ];
        for (name, v) in rates {
            if !(0.0..=1.0).contains(&v) {
                return Err(OracleError::InvalidNoise(format!("{name} = {v} must lie in [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// One of the shipped presets.
    pub fn preset(name: &str) -> Result<Self> {
        let text = match name {
            "clean" => include_str!("../presets/clean.toml"),
            "mild" => include_str!("../presets/mild.toml"),
            "harsh" => include_str!("../presets/harsh.toml"),
            _ => return Err(OracleError::UnknownPreset(name.to_string())),
        };
        Self::from_toml_str(text)
    }

    /// A preset name or the path of a TOML file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if PRESETS.contains(&name_or_path) {
            return Self::preset(name_or_path);
        }
        let path = Path::new(name_or_path);
        if path.is_file() {
            return Self::from_toml_str(&std::fs::read_to_string(path)?);
        }
        Err(OracleError::UnknownPreset(name_or_path.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_load_and_grow_harsher() {
        let [c, m, h] = PRESETS.map(|p| NoiseConfig::preset(p).unwrap());
        assert_eq!(c, NoiseConfig::clean());
        let fields = |n: &NoiseConfig| {
            [
                n.box_jitter,
                n.score_sigma,
                n.false_positive_rate,
                n.false_negative_rate,
                n.heatmap_blur,
                n.heatmap_speckle,
                n.ocr_substitution,
                n.ocr_drop,
            ]
        };
        for ((a, b), c) in fields(&c).iter().zip(fields(&m)).zip(fields(&h)) {
            assert!(*a <= b && b <= c);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = NoiseConfig { ocr_drop: 1.5, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = NoiseConfig { box_jitter: -1.0, ..Default::default() };
        assert!(bad.validate().is_err());
        assert!(NoiseConfig::from_toml_str("box_jiter = 1.0").is_err());
        assert!(matches!(NoiseConfig::resolve("medium"), Err(OracleError::UnknownPreset(_))));
    }
}
