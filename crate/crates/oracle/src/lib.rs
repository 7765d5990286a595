//! Stand-ins for the trained detector and OCR stages.
//!
//! [`simulate_detector`] turns [`GroundTruth`](charter_synth::GroundTruth)
//! into scored boxes and degraded heatmaps; [`simulate_ocr`] turns its text
//! boxes into tokens with corrupted strings. Both are deterministic in
//! `(gt, noise, seed)`, and with [`NoiseConfig::clean`] they reproduce the
//! annotations exactly.
//!
//! [`numeric`] holds the token-level number parser shared with analysis,
//! including the "10" plus raised exponent heuristic.

pub mod detector;
pub mod noise;
pub mod numeric;
pub mod ocr;

pub use detector::{simulate_detector, DetectorOutput};
pub use noise::NoiseConfig;
pub use numeric::{numeric_tokens, parse_numeric_token, parse_plain_number, NumericToken};
pub use ocr::{simulate_ocr, OcrOutput, OcrToken};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("invalid noise config: {0}")]
    InvalidNoise(String),
    #[error("unknown noise preset {0:?}")]
    UnknownPreset(String),
    #[error("malformed detector output: {0}")]
    Malformed(String),
    #[error(transparent)]
    Synth(#[from] charter_synth::SynthError),
    #[error(transparent)]
    Core(#[from] charter_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;

/// Independent RNG stream for one simulator.
pub(crate) fn stream(seed: u64, tag: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    let mut z = seed ^ tag;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    rand_chacha::ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}
