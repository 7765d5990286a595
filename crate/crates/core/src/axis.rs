use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    X,
    Y,
}

/// How axis values relate to pixel positions: `value` is affine in pixels
/// for linear axes, `log10(value)` is for logarithmic ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisScale {
    #[default]
    Linear,
    Log10,
}

impl AxisScale {
    /// Maps a data value into the space where the axis is affine.
    pub fn forward(&self, value: f64) -> f64 {
        match self {
            Self::Linear => value,
            Self::Log10 => value.log10(),
        }
    }

    pub fn inverse(&self, t: f64) -> f64 {
        match self {
            Self::Linear => t,
            Self::Log10 => 10f64.powf(t),
        }
    }
}
