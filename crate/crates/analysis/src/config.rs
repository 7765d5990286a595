use serde::{Deserialize, Serialize};

/// Every threshold used by the analysis stage. Distances are raster pixels
/// unless noted; colour distances are Euclidean RGB.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    /// Minimum score of element boxes (bars, sectors).
    pub box_score_threshold: f64,
    /// Minimum score of chart-region, legend and text boxes.
    pub region_score_threshold: f64,
    /// Heatmap peak threshold.
    pub peak_threshold: f32,
    /// Peak suppression radius in heatmap pixels.
    pub peak_min_distance: u32,
    /// Axis label bin width as a fraction of the median token height.
    pub axis_bin_factor: f64,
    /// Largest tolerated residual of an axis support point.
    pub axis_residual_tolerance: f64,
    /// Snap radius for tick-heatmap peaks.
    pub tick_snap_radius: f64,
    /// Allowed relative deviation of a bar's width from the median.
    pub bar_width_tolerance: f64,
    pub baseline_tolerance: f64,
    /// Search radius, in heatmap pixels, for bar-corner peaks.
    pub corner_snap_radius: f64,
    /// Below this share of the dominant colour a region counts as textured.
    pub uniform_fraction: f64,
    pub legend_color_distance: f64,
    /// Smallest pie radius considered.
    pub min_radius: f64,
    /// Circles whose 1-pixel circumference band holds less than this
    /// fraction of a full ring (in heatmap pixels) are rejected.
    pub circle_support: f64,
    /// Sector boundaries: histogram peaks above this share of the maximum.
    pub sector_peak_fraction: f64,
    /// Boundaries closer than this (degrees) are merged.
    pub sector_merge_degrees: f64,
    /// Connector components must be smaller than this fraction of the disc area.
    pub connector_area_fraction: f64,
    /// Adjacent labels must lie within this multiple of the radius.
    pub adjacent_radius_factor: f64,
    pub line_threshold: f64,
    pub color_merge_distance: f64,
    pub stitch_gap: f64,
    pub stitch_cone_degrees: f64,
    /// Knee peaks further than this from every trace are ignored.
    pub knee_snap_distance: f64,
    /// Minimum pixels for a colour cluster to count as a line.
    pub min_line_pixels: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            box_score_threshold: 0.5,
            region_score_threshold: 0.3,
            peak_threshold: 0.3,
            peak_min_distance: 4,
            axis_bin_factor: 0.5,
            axis_residual_tolerance: 1.5,
            tick_snap_radius: 3.0,
            bar_width_tolerance: 0.3,
            baseline_tolerance: 2.0,
            corner_snap_radius: 3.0,
            uniform_fraction: 0.6,
            legend_color_distance: 60.0,
            min_radius: 8.0,
            circle_support: 0.3,
            sector_peak_fraction: 0.4,
            sector_merge_degrees: 4.0,
            connector_area_fraction: 0.02,
            adjacent_radius_factor: 1.6,
            line_threshold: 0.3,
            color_merge_distance: 40.0,
            stitch_gap: 10.0,
            stitch_cone_degrees: 45.0,
            knee_snap_distance: 6.0,
            min_line_pixels: 20,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_defaults() {
        let c = AnalysisConfig::default();
        assert_eq!((c.peak_threshold, c.peak_min_distance), (0.3, 4));
        assert_eq!((c.axis_bin_factor, c.axis_residual_tolerance), (0.5, 1.5));
        assert_eq!((c.bar_width_tolerance, c.baseline_tolerance), (0.3, 2.0));
        assert_eq!(c.legend_color_distance, 60.0);
        assert_eq!((c.circle_support, c.sector_peak_fraction, c.sector_merge_degrees), (0.3, 0.4, 4.0));
        assert_eq!(c.connector_area_fraction, 0.02);
        assert_eq!((c.line_threshold, c.color_merge_distance), (0.3, 40.0));
        assert_eq!((c.stitch_gap, c.stitch_cone_degrees), (10.0, 45.0));
    }
}
