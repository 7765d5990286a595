//! Synthetic chart generator.
//!
//! [`sample_spec`] draws a [`ChartSpec`] from a seed and a [`SynthConfig`];
//! [`render`] paints it onto a 512x512 [`Raster`](charter_core::Raster) and
//! records the exact [`GroundTruth`] geometry; [`emit_heatmaps`] turns that
//! geometry into per-category training-style heatmaps. [`generate`] wraps
//! the three with resampling on layout overflow.

mod canvas;
pub mod config;
pub mod font;
pub mod heatmaps;
pub mod render;
pub mod spec;
pub mod texture;
pub mod truth;
mod words;

pub use config::SynthConfig;
pub use heatmaps::{emit_heatmaps, HeatmapResolution, SPLAT_SIGMA};
pub use render::render;
pub use spec::{
    sample_spec, AxisSpec, Border, ChartSpec, LegendPosition, PieLabelMode, PieStyle, SeriesData, SeriesSpec, Style,
    TickFormat,
};
pub use texture::{Texture, TextureKind};
pub use truth::{
    AxisGt, BarGt, GroundTruth, LegendEntryGt, LegendGt, LineGt, PieGt, ScatterGt, SectorGt, TextGt, TextRole,
    TickGt, GT_SCHEMA_VERSION,
};

use charter_core::ChartType;

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("layout overflow: {0}")]
    LayoutOverflow(String),
    #[error("heatmap resolution {width}x{height} does not divide raster {raster_width}x{raster_height}")]
    Resolution { width: u32, height: u32, raster_width: u32, raster_height: u32 },
    #[error("no renderable {chart_type} chart for seed {seed} after {attempts} attempts")]
    Exhausted { seed: u64, chart_type: ChartType, attempts: u32 },
    #[error(transparent)]
    Core(#[from] charter_core::Error),
}

pub type Result<T> = std::result::Result<T, SynthError>;

/// A rendered chart with the spec and attempt index that produced it.
#[derive(Debug, Clone)]
pub struct GeneratedChart {
    pub spec: ChartSpec,
    pub raster: charter_core::Raster,
    pub truth: GroundTruth,
    /// Number of specs rejected for layout overflow before this one.
    pub attempt: u32,
}

/// Seed used for resampling attempt `attempt` of base seed `seed`.
pub fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    if attempt == 0 {
        seed
    } else {
        splitmix64(seed ^ (attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples and renders a chart, resampling while the layout overflows.
pub fn generate(seed: u64, chart_type: ChartType, config: &SynthConfig) -> Result<GeneratedChart> {
    config.validate()?;
    for attempt in 0..config.max_attempts {
        let spec = sample_spec(attempt_seed(seed, attempt), chart_type, config)?;
        match render(&spec) {
            Ok((raster, truth)) => return Ok(GeneratedChart { spec, raster, truth, attempt }),
            Err(SynthError::LayoutOverflow(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(SynthError::Exhausted { seed, chart_type, attempts: config.max_attempts })
}
