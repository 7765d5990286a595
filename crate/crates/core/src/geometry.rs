//! Detector-style geometry: points, polylines, scored boxes.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intensity: Option<f64>,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y, intensity: None }
    }

    pub const fn with_intensity(x: f64, y: f64, intensity: f64) -> Self {
        Self { x, y, intensity: Some(intensity) }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn scaled(&self, s: f64) -> Point {
        Point { x: self.x * s, y: self.y * s, intensity: self.intensity }
    }
}

/// Ordered vertices; at least two, consecutive vertices distinct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct Polyline(Vec<Point>);

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Geometry(format!("polyline needs at least 2 points, got {}", points.len())));
        }
        if let Some(w) = points.windows(2).find(|w| w[0].x == w[1].x && w[0].y == w[1].y) {
            return Err(Error::Geometry(format!("repeated polyline vertex ({}, {})", w[0].x, w[0].y)));
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[Point] {
        &self.0
    }

    pub fn length(&self) -> f64 {
        self.0.windows(2).map(|w| w[0].distance(&w[1])).sum()
    }
}

impl TryFrom<Vec<Point>> for Polyline {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        Polyline::new(v)
    }
}

impl From<Polyline> for Vec<Point> {
    fn from(p: Polyline) -> Self {
        p.0
    }
}

/// Box categories produced by the page-level and element-level detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxCategory {
    VerticalBar,
    HorizontalBar,
    PieSector,
    BarChart,
    PieChart,
    LineChart,
    ScatterPlot,
    Legend,
    Title,
    Caption,
    XLabel,
    YLabel,
}

impl BoxCategory {
    pub fn is_chart_region(&self) -> bool {
        matches!(self, Self::BarChart | Self::PieChart | Self::LineChart | Self::ScatterPlot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub x_min: f64,
    pub y_min: f64,
    pub x_max: f64,
    pub y_max: f64,
    pub category: BoxCategory,
    pub score: f64,
}

impl BBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64, category: BoxCategory, score: f64) -> Result<Self> {
        let b = Self { x_min, y_min, x_max, y_max, category, score };
        if !b.is_valid() {
            return Err(Error::Geometry(format!(
                "invalid box ({x_min}, {y_min}, {x_max}, {y_max}) score {score}"
            )));
        }
        Ok(b)
    }

    /// Positive extent, finite corners and a score in `[0, 1]`.
    pub fn is_valid(&self) -> bool {
        [self.x_min, self.y_min, self.x_max, self.y_max].iter().all(|v| v.is_finite())
            && self.x_min < self.x_max
            && self.y_min < self.y_max
            && (0.0..=1.0).contains(&self.score)
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width().max(0.0) * self.height().max(0.0)
    }

    pub fn center(&self) -> Point {
        Point::new((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn expanded(&self, margin: f64) -> BBox {
        BBox {
            x_min: self.x_min - margin,
            y_min: self.y_min - margin,
            x_max: self.x_max + margin,
            y_max: self.y_max + margin,
            ..*self
        }
    }

    pub fn intersection_area(&self, other: &BBox) -> f64 {
        let w = self.x_max.min(other.x_max) - self.x_min.max(other.x_min);
        let h = self.y_max.min(other.y_max) - self.y_min.max(other.y_min);
        if w <= 0.0 || h <= 0.0 {
            0.0
        } else {
            w * h
        }
    }

    /// Euclidean distance from a point to the box (0 inside).
    pub fn distance_to(&self, p: &Point) -> f64 {
        let dx = (self.x_min - p.x).max(0.0).max(p.x - self.x_max);
        let dy = (self.y_min - p.y).max(0.0).max(p.y - self.y_max);
        dx.hypot(dy)
    }
}

/// Intersection over union; disjoint or degenerate boxes give 0.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let inter = a.intersection_area(b);
    if inter <= 0.0 {
        return 0.0;
    }
    let union = a.area() + b.area() - inter;
    if union <= 0.0 {
        0.0
    } else {
        (inter / union).clamp(0.0, 1.0)
    }
}
