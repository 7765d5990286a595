//! Exact geometric and tabular annotations of a rendered chart.
//!
//! Angles are degrees counter-clockwise from +x as seen on screen, i.e.
//! `atan2(-dy, dx)` in image coordinates. Boxes are `[x_min, y_min, x_max, y_max]`.

use charter_core::{AxisScale, ChartTable, ChartType, Color, Orientation};
use serde::{Deserialize, Serialize};

pub const GT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub schema_version: u32,
    pub chart_type: ChartType,
    pub raster_size: [u32; 2],
    pub table: ChartTable,
    pub background: Color,
    pub text_color: Color,
    /// Stage-1 chart region: the plot area, or the disc bounds for pies.
    pub chart_region: [f64; 4],
    pub plot_area: Option<[f64; 4]>,
    #[serde(default)]
    pub bars: Vec<BarGt>,
    #[serde(default)]
    pub pies: Vec<PieGt>,
    #[serde(default)]
    pub lines: Vec<LineGt>,
    #[serde(default)]
    pub scatter: Vec<ScatterGt>,
    #[serde(default)]
    pub axes: Vec<AxisGt>,
    #[serde(default)]
    pub texts: Vec<TextGt>,
    pub legend: Option<LegendGt>,
    /// Pie connector strokes, inner end first.
    #[serde(default)]
    pub connectors: Vec<[[f64; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarGt {
    pub label: String,
    pub value: f64,
    pub bbox: [f64; 4],
    pub color: Color,
    pub textured: bool,
}

impl BarGt {
    /// Corners in heatmap category order: top-left, top-right, bottom-left, bottom-right.
    pub fn corners(&self) -> [[f64; 2]; 4] {
        let [x0, y0, x1, y1] = self.bbox;
        [[x0, y0], [x1, y0], [x0, y1], [x1, y1]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieGt {
    pub center: [f64; 2],
    pub radius: f64,
    pub sectors: Vec<SectorGt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorGt {
    pub label: String,
    pub fraction: f64,
    /// Start angle in `[0, 360)`.
    pub start_deg: f64,
    /// `start_deg + 360 * fraction`; may exceed 360.
    pub end_deg: f64,
    pub color: Color,
    pub textured: bool,
    /// Tight bounds of the sector region.
    pub bbox: [f64; 4],
}

impl SectorGt {
    pub fn span(&self) -> f64 {
        self.end_deg - self.start_deg
    }

    pub fn mid_deg(&self) -> f64 {
        (self.start_deg + self.end_deg) / 2.0
    }
}

/// Point on the circle at `deg`.
pub fn polar(center: [f64; 2], radius: f64, deg: f64) -> [f64; 2] {
    let t = deg.to_radians();
    [center[0] + radius * t.cos(), center[1] - radius * t.sin()]
}

/// Bounds of the sector from `start` to `end` degrees.
pub fn sector_bbox(center: [f64; 2], radius: f64, start: f64, end: f64) -> [f64; 4] {
    let mut pts = vec![center, polar(center, radius, start), polar(center, radius, end)];
    let mut k = (start / 90.0).ceil() * 90.0;
    while k < end {
        pts.push(polar(center, radius, k));
        k += 90.0;
    }
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in pts {
        b = [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])];
    }
    b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineGt {
    pub label: String,
    pub color: Color,
    pub dashed: bool,
    /// Vertices in raster pixels.
    pub vertices: Vec<[f64; 2]>,
    /// Vertices in data units.
    pub values: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterGt {
    pub label: String,
    pub color: Color,
    pub dot_radius: f64,
    pub dots: Vec<[f64; 2]>,
    pub values: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisGt {
    pub orientation: Orientation,
    pub scale: AxisScale,
    /// Axis line and tick labels are not drawn.
    pub hidden: bool,
    /// Pixel coordinate along the axis of `value_range[0]` and `value_range[1]`.
    pub pixel_range: [f64; 2],
    pub value_range: [f64; 2],
    pub ticks: Vec<TickGt>,
}

impl AxisGt {
    pub fn value_at(&self, pixel: f64) -> f64 {
        let t = (pixel - self.pixel_range[0]) / (self.pixel_range[1] - self.pixel_range[0]);
        let [a, b] = self.value_range.map(|v| self.scale.forward(v));
        self.scale.inverse(a + t * (b - a))
    }

    pub fn pixel_at(&self, value: f64) -> f64 {
        let [a, b] = self.value_range.map(|v| self.scale.forward(v));
        let t = (self.scale.forward(value) - a) / (b - a);
        self.pixel_range[0] + t * (self.pixel_range[1] - self.pixel_range[0])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickGt {
    pub value: f64,
    /// Where the tick meets the axis line.
    pub position: [f64; 2],
    pub text: String,
    pub superscript: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TextRole {
    Title,
    Caption,
    XTitle,
    YTitle,
    XTick,
    YTick,
    CategoryLabel,
    ValueLabel,
    LegendEntry,
    PieLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextGt {
    pub role: TextRole,
    pub text: String,
    /// Corners in reading order: top-left, top-right, bottom-right, bottom-left.
    pub polygon: [[f64; 2]; 4],
    pub angle: f64,
    pub size: f64,
    /// Raised exponent drawn after the text.
    pub superscript: Option<String>,
    pub superscript_polygon: Option<[[f64; 2]; 4]>,
}

impl TextGt {
    pub fn bbox(&self) -> [f64; 4] {
        crate::font::polygon_bbox(&self.polygon)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendGt {
    pub bbox: [f64; 4],
    pub entries: Vec<LegendEntryGt>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendEntryGt {
    pub label: String,
    pub color: Color,
    pub swatch: [f64; 4],
}

impl GroundTruth {
    pub fn to_json(&self) -> serde_json::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn axis(&self, orientation: Orientation) -> Option<&AxisGt> {
        self.axes.iter().find(|a| a.orientation == orientation)
    }

    pub fn texts_with_role(&self, role: TextRole) -> impl Iterator<Item = &TextGt> {
        self.texts.iter().filter(move |t| t.role == role)
    }
}
