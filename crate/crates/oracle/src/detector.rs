//! Simulated box and heatmap detector.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use charter_core::{BBox, BoxCategory, ChartType, Heatmap, HeatmapCategory};
use charter_synth::{emit_heatmaps, GroundTruth, HeatmapResolution, TextRole};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::{stream, NoiseConfig, OracleError, Result};

pub const DETECTOR_SCHEMA_VERSION: u32 = 1;
const DETECTOR_TAG: u64 = 0xD37E_C70B_0000_0001;

/// Boxes from both detector stages plus the heatmap set.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorOutput {
    pub raster_size: [u32; 2],
    pub boxes: Vec<BBox>,
    pub heatmaps: BTreeMap<HeatmapCategory, Heatmap>,
}

/// On-disk form: heatmaps are referenced by path relative to the JSON file.
#[derive(Debug, Serialize, Deserialize)]
struct DetectorFile {
    schema_version: u32,
    raster_size: [u32; 2],
    boxes: Vec<BBox>,
    heatmaps: BTreeMap<HeatmapCategory, String>,
}

impl DetectorOutput {
    pub fn heatmap(&self, category: HeatmapCategory) -> Option<&Heatmap> {
        self.heatmaps.get(&category)
    }

    pub fn boxes_of(&self, category: BoxCategory) -> impl Iterator<Item = &BBox> {
        self.boxes.iter().filter(move |b| b.category == category)
    }

    /// Directory holding the heatmap PNGs for `json_path`
    /// (`<id>.det.json` → `<id>.det.hm`).
    pub fn heatmap_dir(json_path: &Path) -> PathBuf {
        let name = json_path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let stem = name.strip_suffix(".json").unwrap_or(&name);
        json_path.with_file_name(format!("{stem}.hm"))
    }

    pub fn write(&self, json_path: &Path) -> Result<()> {
        let dir = Self::heatmap_dir(json_path);
        let dir_name = dir.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        let mut refs = BTreeMap::new();
        for (cat, hm) in &self.heatmaps {
            hm.write_to_dir(&dir)?;
            refs.insert(*cat, format!("{dir_name}/{}.png", cat.name()));
        }
        let file = DetectorFile {
            schema_version: DETECTOR_SCHEMA_VERSION,
            raster_size: self.raster_size,
            boxes: self.boxes.clone(),
            heatmaps: refs,
        };
        std::fs::write(json_path, serde_json::to_string_pretty(&file)? + "\n")?;
        Ok(())
    }

    pub fn read(json_path: &Path) -> Result<Self> {
        let file: DetectorFile = serde_json::from_slice(&std::fs::read(json_path)?)?;
        if file.schema_version != DETECTOR_SCHEMA_VERSION {
            return Err(OracleError::Malformed(format!("unsupported schema_version {}", file.schema_version)));
        }
        if let Some(b) = file.boxes.iter().find(|b| !b.is_valid()) {
            return Err(OracleError::Malformed(format!("invalid box {b:?}")));
        }
        let base = json_path.parent().unwrap_or(Path::new("."));
        let mut heatmaps = BTreeMap::new();
        for (cat, rel) in file.heatmaps {
            let hm = Heatmap::read_png(base.join(&rel))?;
            if hm.category() != cat {
                return Err(OracleError::Malformed(format!("{rel} holds {} not {}", hm.category(), cat)));
            }
            heatmaps.insert(cat, hm);
        }
        Ok(Self { raster_size: file.raster_size, boxes: file.boxes, heatmaps })
    }
}

fn element_category(chart_type: ChartType) -> BoxCategory {
    match chart_type {
        ChartType::Hbar => BoxCategory::HorizontalBar,
        _ => BoxCategory::VerticalBar,
    }
}

fn region_category(chart_type: ChartType) -> BoxCategory {
    match chart_type {
        ChartType::Vbar | ChartType::Hbar => BoxCategory::BarChart,
        ChartType::Pie => BoxCategory::PieChart,
        ChartType::Line => BoxCategory::LineChart,
        ChartType::Scatter => BoxCategory::ScatterPlot,
    }
}

fn exact(b: [f64; 4], category: BoxCategory) -> BBox {
    BBox { x_min: b[0], y_min: b[1], x_max: b[2], y_max: b[3], category, score: 1.0 }
}

/// Every box a perfect detector would report, elements first.
pub fn ground_truth_boxes(gt: &GroundTruth) -> Vec<BBox> {
    let mut out = Vec::new();
    let element = element_category(gt.chart_type);
    out.extend(gt.bars.iter().map(|b| exact(b.bbox, element)));
    for pie in &gt.pies {
        out.extend(pie.sectors.iter().map(|s| exact(s.bbox, BoxCategory::PieSector)));
    }
    out.push(exact(gt.chart_region, region_category(gt.chart_type)));
    if let Some(l) = &gt.legend {
        out.push(exact(l.bbox, BoxCategory::Legend));
    }
    for t in &gt.texts {
        let cat = match t.role {
            TextRole::Title => BoxCategory::Title,
            TextRole::Caption => BoxCategory::Caption,
            TextRole::XTitle => BoxCategory::XLabel,
            TextRole::YTitle => BoxCategory::YLabel,
            _ => continue,
        };
        out.push(exact(t.bbox(), cat));
    }
    out
}

fn is_element(c: BoxCategory) -> bool {
    matches!(c, BoxCategory::VerticalBar | BoxCategory::HorizontalBar | BoxCategory::PieSector)
}

/// Simulates the detector at the default 128x128 heatmap resolution.
pub fn simulate_detector(gt: &GroundTruth, noise: &NoiseConfig, seed: u64) -> Result<DetectorOutput> {
    simulate_detector_at(gt, noise, seed, HeatmapResolution::default())
}

pub fn simulate_detector_at(
    gt: &GroundTruth,
    noise: &NoiseConfig,
    seed: u64,
    resolution: HeatmapResolution,
) -> Result<DetectorOutput> {
    noise.validate()?;
    let mut rng = stream(seed, DETECTOR_TAG);
    let truth = ground_truth_boxes(gt);
    let jitter = Normal::new(0.0, noise.box_jitter).expect("validated sigma");
    let score = Normal::new(0.0, noise.score_sigma).expect("validated sigma");
    let mut boxes = Vec::with_capacity(truth.len());
    let mut spurious = Vec::new();
    for b in &truth {
        if is_element(b.category) {
            if noise.false_negative_rate > 0.0 && rng.gen_bool(noise.false_negative_rate) {
                continue;
            }
            if noise.false_positive_rate > 0.0 && rng.gen_bool(noise.false_positive_rate) {
                spurious.push(spurious_box(&mut rng, b, gt.chart_region));
            }
        }
        let mut c = [b.x_min, b.y_min, b.x_max, b.y_max];
        if noise.box_jitter > 0.0 {
            for v in &mut c {
                *v += jitter.sample(&mut rng);
            }
            if c[2] < c[0] + 1.0 {
                c[2] = c[0] + 1.0;
            }
            if c[3] < c[1] + 1.0 {
                c[3] = c[1] + 1.0;
            }
        }
        let s = if noise.score_sigma > 0.0 { (1.0 - score.sample(&mut rng).abs()).clamp(0.0, 1.0) } else { 1.0 };
        boxes.push(BBox { x_min: c[0], y_min: c[1], x_max: c[2], y_max: c[3], category: b.category, score: s });
    }
    boxes.extend(spurious);

    let mut heatmaps = BTreeMap::new();
    for hm in emit_heatmaps(gt, resolution)? {
        let hm = degrade(hm, noise, &mut rng)?;
        heatmaps.insert(hm.category(), hm);
    }
    Ok(DetectorOutput { raster_size: gt.raster_size, boxes, heatmaps })
}

/// A box shaped like `like`, scaled by up to 2x either way, placed
/// uniformly inside `region`, with a uniform score.
fn spurious_box(rng: &mut impl Rng, like: &BBox, region: [f64; 4]) -> BBox {
    let w = (like.width() * rng.gen_range(0.5..2.0)).min(region[2] - region[0]).max(1.0);
    let h = (like.height() * rng.gen_range(0.5..2.0)).min(region[3] - region[1]).max(1.0);
    let x = region[0] + rng.gen::<f64>() * (region[2] - region[0] - w).max(0.0);
    let y = region[1] + rng.gen::<f64>() * (region[3] - region[1] - h).max(0.0);
    BBox { x_min: x, y_min: y, x_max: x + w, y_max: y + h, category: like.category, score: rng.gen() }
}

/// Gaussian blur followed by clipped uniform speckle.
fn degrade(hm: Heatmap, noise: &NoiseConfig, rng: &mut impl Rng) -> Result<Heatmap> {
    if noise.heatmap_blur == 0.0 && noise.heatmap_speckle == 0.0 {
        return Ok(hm);
    }
    let (w, h, cat) = (hm.width() as usize, hm.height() as usize, hm.category());
    let mut v: Vec<f32> = hm.values().to_vec();
    if noise.heatmap_blur > 0.0 {
        v = blur(&v, w, h, noise.heatmap_blur);
    }
    if noise.heatmap_speckle > 0.0 {
        let amp = noise.heatmap_speckle as f32;
        for x in &mut v {
            *x = (*x + amp * rng.gen_range(-1.0f32..=1.0)).clamp(0.0, 1.0);
        }
    }
    for x in &mut v {
        *x = x.clamp(0.0, 1.0);
    }
    Ok(Heatmap::from_values(w as u32, h as u32, v, cat)?)
}

/// Separable Gaussian blur with clamped borders.
pub fn blur(values: &[f32], w: usize, h: usize, sigma: f64) -> Vec<f32> {
    let radius = (3.0 * sigma).ceil() as i64;
    let kernel: Vec<f64> = (-radius..=radius).map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let norm: f64 = kernel.iter().sum();
    let kernel: Vec<f32> = kernel.iter().map(|k| (k / norm) as f32).collect();
    let mut tmp = vec![0.0f32; values.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                let xx = (x as i64 + k as i64 - radius).clamp(0, w as i64 - 1) as usize;
                acc += kv * values[y * w + xx];
            }
            tmp[y * w + x] = acc;
        }
    }
    let mut out = vec![0.0f32; values.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                let yy = (y as i64 + k as i64 - radius).clamp(0, h as i64 - 1) as usize;
                acc += kv * tmp[yy * w + x];
            }
            out[y * w + x] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blur_preserves_mass_away_from_borders() {
        let mut v = vec![0.0f32; 32 * 32];
        v[16 * 32 + 16] = 1.0;
        let b = blur(&v, 32, 32, 1.5);
        let total: f32 = b.iter().sum();
        assert!((total - 1.0).abs() < 1e-4);
        assert!(b[16 * 32 + 16] > b[16 * 32 + 18]);
    }

    #[test]
    fn heatmap_dir_naming() {
        assert_eq!(DetectorOutput::heatmap_dir(Path::new("/d/c7.det.json")), PathBuf::from("/d/c7.det.hm"));
    }
}
