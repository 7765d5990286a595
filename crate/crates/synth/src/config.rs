//! Sampling ranges and style probabilities for the generator.

use serde::{Deserialize, Serialize};

use crate::{Result, SynthError};

/// Every axis of variation the sampler exercises. The defaults are this
/// generator's choices; a config file overriding them is the contract for a
/// dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SynthConfig {
    pub canvas_size: u32,
    pub bar_count: [usize; 2],
    pub pie_slices: [usize; 2],
    pub line_series: [usize; 2],
    pub line_points: [usize; 2],
    pub scatter_series: [usize; 2],
    pub scatter_points: [usize; 2],
    /// Smallest pie fraction; fractions are redrawn until all exceed it.
    pub min_pie_fraction: f64,
    /// Range of the empty fraction of each bar slot.
    pub bar_gap: [f64; 2],
    /// Minimum Euclidean RGB distance between series colours and from the
    /// background, text and white.
    pub min_color_distance: f64,
    pub p_hidden_axes: f64,
    pub p_legend: f64,
    pub p_element_texture: f64,
    pub p_background_texture: f64,
    pub p_rotated_labels: f64,
    pub p_value_on_bar: f64,
    pub p_uniform_color: f64,
    pub p_exponent_ticks: f64,
    pub p_thousands: f64,
    pub p_currency: f64,
    pub p_nonzero_bottom: f64,
    pub p_dashed: f64,
    pub p_border: f64,
    pub p_title: f64,
    pub p_caption: f64,
    pub p_axis_titles: f64,
    pub p_separators: f64,
    /// Relative weights of the legend, connector and adjacent pie label modes.
    pub pie_label_weights: [f64; 3],
    pub max_attempts: u32,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            canvas_size: 512,
            bar_count: [2, 12],
            pie_slices: [2, 8],
            line_series: [1, 4],
            line_points: [4, 10],
            scatter_series: [1, 3],
            scatter_points: [8, 30],
            min_pie_fraction: 0.05,
            bar_gap: [0.1, 0.6],
            min_color_distance: 80.0,
            p_hidden_axes: 0.2,
            p_legend: 0.35,
            p_element_texture: 0.2,
            p_background_texture: 0.15,
            p_rotated_labels: 0.25,
            p_value_on_bar: 0.3,
            p_uniform_color: 0.15,
            p_exponent_ticks: 0.1,
            p_thousands: 0.15,
            p_currency: 0.1,
            p_nonzero_bottom: 0.2,
            p_dashed: 0.3,
            p_border: 0.5,
            p_title: 0.8,
            p_caption: 0.4,
            p_axis_titles: 0.6,
            p_separators: 0.5,
            pie_label_weights: [1.0, 1.0, 1.0],
            max_attempts: 64,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(SynthError::InvalidConfig(msg));
        if self.canvas_size < 256 {
            return bad(format!("canvas_size {} is below 256", self.canvas_size));
        }
        for (name, r) in [
            ("bar_count", self.bar_count),
            ("pie_slices", self.pie_slices),
            ("line_series", self.line_series),
            ("line_points", self.line_points),
            ("scatter_series", self.scatter_series),
            ("scatter_points", self.scatter_points),
        ] {
            if r[0] < 1 || r[0] > r[1] {
                return bad(format!("{name} range [{}, {}] is empty or starts below 1", r[0], r[1]));
            }
        }
        if self.pie_slices[0] < 2 {
            return bad("pie_slices must start at 2 or more".into());
        }
        if self.line_points[0] < 2 {
            return bad("line_points must start at 2 or more".into());
        }
        if !(0.0..0.5).contains(&self.min_pie_fraction)
            || self.min_pie_fraction * self.pie_slices[1] as f64 >= 1.0
        {
            return bad(format!(
                "min_pie_fraction {} is infeasible for up to {} slices",
                self.min_pie_fraction, self.pie_slices[1]
            ));
        }
        if !(0.0..1.0).contains(&self.bar_gap[0]) || !(0.0..1.0).contains(&self.bar_gap[1]) || self.bar_gap[0] > self.bar_gap[1]
        {
            return bad(format!("bar_gap range {:?} must lie in [0, 1)", self.bar_gap));
        }
        if !(self.min_color_distance >= 30.0 && self.min_color_distance <= 150.0) {
            return bad(format!("min_color_distance {} must lie in [30, 150]", self.min_color_distance));
        }
        for (name, p) in self.probabilities() {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} is not a probability"));
            }
        }
        if self.pie_label_weights.iter().any(|w| !(*w >= 0.0)) || self.pie_label_weights.iter().sum::<f64>() <= 0.0 {
            return bad("pie_label_weights must be non-negative with a positive sum".into());
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be positive".into());
        }
        Ok(())
    }

    fn probabilities(&self) -> [(&'static str, f64); 17] {
        [
            ("p_hidden_axes", self.p_hidden_axes),
            ("p_legend", self.p_legend),
            ("p_element_texture", self.p_element_texture),
            ("p_background_texture", self.p_background_texture),
            ("p_rotated_labels", self.p_rotated_labels),
            ("p_value_on_bar", self.p_value_on_bar),
            ("p_uniform_color", self.p_uniform_color),
            ("p_exponent_ticks", self.p_exponent_ticks),
            ("p_thousands", self.p_thousands),
            ("p_currency", self.p_currency),
            ("p_nonzero_bottom", self.p_nonzero_bottom),
            ("p_dashed", self.p_dashed),
            ("p_border", self.p_border),
            ("p_title", self.p_title),
            ("p_caption", self.p_caption),
            ("p_axis_titles", self.p_axis_titles),
            ("p_separators", self.p_separators),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SynthConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_ranges() {
        let mut c = SynthConfig { bar_count: [5, 3], ..Default::default() };
        assert!(matches!(c.validate(), Err(SynthError::InvalidConfig(_))));
        c = SynthConfig { p_legend: 1.5, ..Default::default() };
        assert!(c.validate().is_err());
        c = SynthConfig { min_pie_fraction: 0.2, pie_slices: [2, 8], ..Default::default() };
        assert!(c.validate().is_err());
        c = SynthConfig { pie_slices: [1, 3], ..Default::default() };
        assert!(c.validate().is_err());
    }

    #[test]
    fn unknown_fields_rejected() {
        let r: std::result::Result<SynthConfig, _> = serde_json::from_str(r#"{"bar_cout": [1, 2]}"#);
        assert!(r.is_err());
        let ok: SynthConfig = serde_json::from_str(r#"{"bar_count": [3, 3]}"#).unwrap();
        assert_eq!(ok.bar_count, [3, 3]);
        assert_eq!(ok.pie_slices, SynthConfig::default().pie_slices);
    }
}
