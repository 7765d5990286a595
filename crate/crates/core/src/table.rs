//! Recovered tabular data and its JSON/CSV forms.

use serde::{Deserialize, Serialize};

use crate::Result;

pub const TABLE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartType {
    Vbar,
    Hbar,
    Pie,
    Line,
    Scatter,
}

impl ChartType {
    pub const ALL: [ChartType; 5] = [Self::Vbar, Self::Hbar, Self::Pie, Self::Line, Self::Scatter];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Vbar => "vbar",
            Self::Hbar => "hbar",
            Self::Pie => "pie",
            Self::Line => "line",
            Self::Scatter => "scatter",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    pub fn is_bar(&self) -> bool {
        matches!(self, Self::Vbar | Self::Hbar)
    }

    /// Bar and pie charts carry rows; line and scatter charts carry series.
    pub fn has_rows(&self) -> bool {
        matches!(self, Self::Vbar | Self::Hbar | Self::Pie)
    }
}

impl std::fmt::Display for ChartType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Where a recovered field came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    AxisInterpolated,
    ValueOnBar,
    AxisLabel,
    Legend,
    Connector,
    AdjacentText,
    SectorGeometry,
    Positional,
    PixelSpace,
    GroundTruth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: String,
    /// Bar value in axis units, or pie fraction of the full circle.
    pub value: f64,
    pub label_source: Provenance,
    pub value_source: Provenance,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub points: Vec<[f64; 2]>,
    pub label_source: Provenance,
    pub value_source: Provenance,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartTable {
    pub schema_version: u32,
    pub chart_type: ChartType,
    #[serde(default)]
    pub title: Option<String>,
    #[serde(default)]
    pub caption: Option<String>,
    #[serde(default)]
    pub x_title: Option<String>,
    #[serde(default)]
    pub y_title: Option<String>,
    #[serde(default)]
    pub rows: Vec<TableRow>,
    #[serde(default)]
    pub series: Vec<Series>,
    /// Extent of the value axis (bars) or y axis (line/scatter), low to high.
    #[serde(default)]
    pub value_range: Option<[f64; 2]>,
    /// Extent of the x axis for line/scatter charts.
    #[serde(default)]
    pub x_range: Option<[f64; 2]>,
}

impl ChartTable {
    pub fn new(chart_type: ChartType) -> Self {
        Self {
            schema_version: TABLE_SCHEMA_VERSION,
            chart_type,
            title: None,
            caption: None,
            x_title: None,
            y_title: None,
            rows: Vec::new(),
            series: Vec::new(),
            value_range: None,
            x_range: None,
        }
    }

    /// Number of scored elements: rows, or points across all series.
    pub fn element_count(&self) -> usize {
        if self.chart_type.has_rows() {
            self.rows.len()
        } else {
            self.series.iter().map(|s| s.points.len()).sum()
        }
    }

    /// Pretty JSON with a trailing newline. Field order is fixed, so equal
    /// tables serialize to identical bytes.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// `label,value` rows for bar/pie charts, `series,x,y` for line/scatter.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.chart_type.has_rows() {
            w.write_record(["label", "value"])?;
            for r in &self.rows {
                w.write_record([r.label.as_str(), &r.value.to_string()])?;
            }
        } else {
            w.write_record(["series", "x", "y"])?;
            for s in &self.series {
                for p in &s.points {
                    w.write_record([s.label.as_str(), &p[0].to_string(), &p[1].to_string()])?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
    }
}
