//! Single-channel confidence grids and peak decoding.

use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::{ImageBuffer, ImageFormat, Luma};
use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result};

/// Current version of the heatmap sidecar JSON.
pub const HEATMAP_SCHEMA_VERSION: u32 = 1;

/// Fiducial and curve categories predicted as heatmaps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeatmapCategory {
    BarTopLeft,
    BarTopRight,
    BarBottomLeft,
    BarBottomRight,
    XTick,
    YTick,
    PieCenter,
    PieCircumference,
    PieRadial,
    PieCorner,
    LineKnee,
    Line,
    ScatterDot,
}

impl HeatmapCategory {
    pub const ALL: [HeatmapCategory; 13] = [
        Self::BarTopLeft,
        Self::BarTopRight,
        Self::BarBottomLeft,
        Self::BarBottomRight,
        Self::XTick,
        Self::YTick,
        Self::PieCenter,
        Self::PieCircumference,
        Self::PieRadial,
        Self::PieCorner,
        Self::LineKnee,
        Self::Line,
        Self::ScatterDot,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::BarTopLeft => "bar_top_left",
            Self::BarTopRight => "bar_top_right",
            Self::BarBottomLeft => "bar_bottom_left",
            Self::BarBottomRight => "bar_bottom_right",
            Self::XTick => "x_tick",
            Self::YTick => "y_tick",
            Self::PieCenter => "pie_center",
            Self::PieCircumference => "pie_circumference",
            Self::PieRadial => "pie_radial",
            Self::PieCorner => "pie_corner",
            Self::LineKnee => "line_knee",
            Self::Line => "line",
            Self::ScatterDot => "scatter_dot",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }

    /// Curve categories are rendered as strokes, the rest as point splats.
    pub fn is_curve(&self) -> bool {
        matches!(self, Self::PieCircumference | Self::PieRadial | Self::Line)
    }
}

impl std::fmt::Display for HeatmapCategory {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Row-major grid of values in `[0, 1]`.
#[derive(Clone, PartialEq)]
pub struct Heatmap {
    width: u32,
    height: u32,
    values: Vec<f32>,
    category: HeatmapCategory,
}

impl std::fmt::Debug for Heatmap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Heatmap")
            .field("category", &self.category)
            .field("width", &self.width)
            .field("height", &self.height)
            .field("mass", &self.mass())
            .finish()
    }
}

/// JSON document stored next to a heatmap PNG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeatmapSidecar {
    pub schema_version: u32,
    pub category: HeatmapCategory,
    pub width: u32,
    pub height: u32,
}

impl Heatmap {
    pub fn zeros(width: u32, height: u32, category: HeatmapCategory) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        Ok(Self { width, height, values: vec![0.0; width as usize * height as usize], category })
    }

    pub fn from_values(width: u32, height: u32, values: Vec<f32>, category: HeatmapCategory) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let expected = width as usize * height as usize;
        if values.len() != expected {
            return Err(Error::BufferLength { expected, actual: values.len() });
        }
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::ValueOutOfRange(bad));
        }
        Ok(Self { width, height, values, category })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn category(&self) -> HeatmapCategory {
        self.category
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> f32 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    /// Zero outside the grid.
    #[inline]
    pub fn get_checked(&self, x: i64, y: i64) -> f32 {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            0.0
        } else {
            self.get(x as u32, y as u32)
        }
    }

    /// Bilinear interpolation at a continuous position, zero outside.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> f64 {
        let x0 = x.floor();
        let y0 = y.floor();
        let fx = x - x0;
        let fy = y - y0;
        let (xi, yi) = (x0 as i64, y0 as i64);
        let v00 = self.get_checked(xi, yi) as f64;
        let v10 = self.get_checked(xi + 1, yi) as f64;
        let v01 = self.get_checked(xi, yi + 1) as f64;
        let v11 = self.get_checked(xi + 1, yi + 1) as f64;
        v00 * (1.0 - fx) * (1.0 - fy) + v10 * fx * (1.0 - fy) + v01 * (1.0 - fx) * fy + v11 * fx * fy
    }

    /// Sets a value, clamping it into `[0, 1]`.
    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: f32) {
        let w = self.width as usize;
        self.values[y as usize * w + x as usize] = if v.is_finite() { v.clamp(0.0, 1.0) } else { 0.0 };
    }

    /// Raises a value to `max(current, v)`.
    #[inline]
    pub fn raise(&mut self, x: u32, y: u32, v: f32) {
        let w = self.width as usize;
        let slot = &mut self.values[y as usize * w + x as usize];
        if v > *slot {
            *slot = v.min(1.0);
        }
    }

    pub fn mass(&self) -> f64 {
        self.values.iter().map(|&v| v as f64).sum()
    }

    pub fn max_value(&self) -> f32 {
        self.values.iter().copied().fold(0.0, f32::max)
    }

    /// Location and value of the first maximum in scan order.
    pub fn argmax(&self) -> (u32, u32, f32) {
        let mut best = (0usize, f32::MIN);
        for (i, &v) in self.values.iter().enumerate() {
            if v > best.1 {
                best = (i, v);
            }
        }
        let w = self.width as usize;
        ((best.0 % w) as u32, (best.0 / w) as u32, best.1)
    }

    pub fn sidecar(&self) -> HeatmapSidecar {
        HeatmapSidecar {
            schema_version: HEATMAP_SCHEMA_VERSION,
            category: self.category,
            width: self.width,
            height: self.height,
        }
    }

    /// 16-bit grayscale PNG, value `v` stored as `round(v * 65535)`.
    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let data: Vec<u16> = self.values.iter().map(|&v| (v as f64 * 65535.0).round() as u16).collect();
        let img: ImageBuffer<Luma<u16>, Vec<u16>> =
            ImageBuffer::from_raw(self.width, self.height, data).expect("length matches dimensions");
        let mut out = Cursor::new(Vec::new());
        img.write_to(&mut out, ImageFormat::Png)?;
        Ok(out.into_inner())
    }

    pub fn decode_png(bytes: &[u8], category: HeatmapCategory) -> Result<Self> {
        let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)?.to_luma16();
        let (w, h) = img.dimensions();
        let values = img.into_raw().into_iter().map(|v| v as f32 / 65535.0).collect();
        Self::from_values(w, h, values, category)
    }

    /// Writes `<dir>/<category>.png` and the `<dir>/<category>.json` sidecar.
    pub fn write_to_dir(&self, dir: impl AsRef<Path>) -> Result<PathBuf> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let png = dir.join(format!("{}.png", self.category.name()));
        std::fs::write(&png, self.encode_png()?)?;
        let sidecar = serde_json::to_string_pretty(&self.sidecar())?;
        std::fs::write(png.with_extension("json"), sidecar + "\n")?;
        Ok(png)
    }

    /// Reads a heatmap PNG together with its sidecar (same stem, `.json`).
    pub fn read_png(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let side_path = path.with_extension("json");
        let sidecar: HeatmapSidecar = serde_json::from_slice(&std::fs::read(&side_path)?)?;
        if sidecar.schema_version != HEATMAP_SCHEMA_VERSION {
            return Err(Error::Sidecar {
                path: side_path,
                reason: format!("unsupported schema_version {}", sidecar.schema_version),
            });
        }
        let hm = Self::decode_png(&std::fs::read(path)?, sidecar.category)?;
        if hm.width != sidecar.width || hm.height != sidecar.height {
            return Err(Error::Sidecar {
                path: side_path,
                reason: format!(
                    "declares {}x{} but image is {}x{}",
                    sidecar.width, sidecar.height, hm.width, hm.height
                ),
            });
        }
        Ok(hm)
    }
}

/// Peaks whose value is at least `threshold` and maximal within the
/// `(2 * min_distance + 1)^2` window around them.
///
/// Results are sorted by descending intensity (scan order on ties) and
/// greedily thinned so that no two returned points are closer than
/// `min_distance`. Coordinates are integer pixel positions.
pub fn local_maxima(h: &Heatmap, threshold: f32, min_distance: u32) -> Vec<Point> {
    let r = min_distance as i64;
    let (w, ht) = (h.width as i64, h.height as i64);
    let mut candidates = Vec::new();
    for y in 0..ht {
        for x in 0..w {
            let v = h.get(x as u32, y as u32);
            if v < threshold || v <= 0.0 {
                continue;
            }
            let mut is_max = true;
            'window: for ny in (y - r).max(0)..=(y + r).min(ht - 1) {
                for nx in (x - r).max(0)..=(x + r).min(w - 1) {
                    if h.get(nx as u32, ny as u32) > v {
                        is_max = false;
                        break 'window;
                    }
                }
            }
            if is_max {
                candidates.push((x, y, v));
            }
        }
    }
    candidates.sort_by(|a, b| b.2.total_cmp(&a.2));
    let min_d = min_distance as f64;
    let mut out: Vec<Point> = Vec::new();
    for (x, y, v) in candidates {
        let p = Point::with_intensity(x as f64, y as f64, v as f64);
        if out.iter().all(|q| q.distance(&p) >= min_d) {
            out.push(p);
        }
    }
    out
}

/// Sub-pixel position of a peak at integer `(x, y)`.
///
/// Fits a parabola to the log-intensities of the three-pixel cross along
/// each axis, which is exact for an isotropic Gaussian; falls back to a
/// three-pixel centroid where the logarithm is undefined.
pub fn refine_peak(h: &Heatmap, x: u32, y: u32) -> Point {
    let (xi, yi) = (x as i64, y as i64);
    let c = h.get(x, y) as f64;
    let dx = parabolic_offset(h.get_checked(xi - 1, yi) as f64, c, h.get_checked(xi + 1, yi) as f64);
    let dy = parabolic_offset(h.get_checked(xi, yi - 1) as f64, c, h.get_checked(xi, yi + 1) as f64);
    Point::with_intensity(x as f64 + dx, y as f64 + dy, c)
}

fn parabolic_offset(l: f64, c: f64, r: f64) -> f64 {
    const FLOOR: f64 = 1e-6;
    if l > FLOOR && c > FLOOR && r > FLOOR {
        let (a, b, d) = (l.ln(), c.ln(), r.ln());
        let denom = a - 2.0 * b + d;
        if denom < -1e-9 {
            return (0.5 * (a - d) / denom).clamp(-1.0, 1.0);
        }
    }
    let s = l + c + r;
    if s > 0.0 {
        (r - l) / s
    } else {
        0.0
    }
}
