//! Line and scatter series.

use charter_core::{
    connected_components, local_maxima, morphology, refine_peak, Color, HeatmapCategory, Mask, MorphOp, Provenance,
    Raster,
};
use charter_oracle::DetectorOutput;
use serde::{Deserialize, Serialize};

use crate::legend::{match_legend, LegendEntry};
use crate::pixels::{dist, mode_of};
use crate::{AnalysisConfig, AxisModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesElement {
    pub label: String,
    pub label_source: Provenance,
    pub color: Color,
    /// Vertices (lines) or dots (scatter) in raster coordinates, by x.
    pub pixels: Vec<[f64; 2]>,
    /// Per-column mean y of the line's pixels; empty for scatter.
    #[serde(default)]
    pub trace: Vec<[f64; 2]>,
    /// `pixels` mapped through the axes, or copied when uncalibrated.
    pub points: Vec<[f64; 2]>,
    pub calibrated: bool,
}

/// Greedy centroid clustering; returns the cluster index of each colour.
fn cluster_colors(colors: &[Color], merge: f64) -> (Vec<usize>, Vec<Color>) {
    let mut sums: Vec<[f64; 4]> = Vec::new();
    let centroid = |s: &[f64; 4]| Color::new((s[0] / s[3]).round() as u8, (s[1] / s[3]).round() as u8, (s[2] / s[3]).round() as u8);
    let mut labels = Vec::with_capacity(colors.len());
    for c in colors {
        let near = sums
            .iter()
            .enumerate()
            .map(|(i, s)| (i, centroid(s).distance(c)))
            .filter(|&(_, d)| d < merge)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        let i = match near {
            Some((i, _)) => i,
            None => {
                sums.push([0.0; 4]);
                sums.len() - 1
            }
        };
        let s = &mut sums[i];
        s[0] += c.r as f64;
        s[1] += c.g as f64;
        s[2] += c.b as f64;
        s[3] += 1.0;
        labels.push(i);
    }
    let cents = sums.iter().map(centroid).collect();
    (labels, cents)
}

fn map_points(pixels: &[[f64; 2]], x: Option<&AxisModel>, y: Option<&AxisModel>) -> (Vec<[f64; 2]>, bool) {
    match (x, y) {
        (Some(x), Some(y)) => (pixels.iter().map(|p| [x.value_at(p[0]), y.value_at(p[1])]).collect(), true),
        _ => (pixels.to_vec(), false),
    }
}

fn assign_labels(series: &mut [SeriesElement], legend: &[LegendEntry], config: &AnalysisConfig) {
    let colors: Vec<Option<Color>> = series.iter().map(|s| Some(s.color)).collect();
    let matched = match_legend(legend, &colors, config);
    for (k, (s, m)) in series.iter_mut().zip(matched).enumerate() {
        match m {
            Some(e) => {
                s.label = legend[e].label.clone();
                s.label_source = Provenance::Legend;
            }
            None => {
                s.label = format!("series_{}", k + 1);
                s.label_source = Provenance::Positional;
            }
        }
    }
}

struct Piece {
    pixels: Vec<(u32, u32)>,
    x_min: u32,
    x_max: u32,
}

impl Piece {
    fn end(&self, right: bool) -> [f64; 2] {
        let x = if right { self.x_max } else { self.x_min };
        let ys: Vec<f64> = self.pixels.iter().filter(|p| p.0 == x).map(|p| p.1 as f64).collect();
        [x as f64, ys.iter().sum::<f64>() / ys.len() as f64]
    }

    /// Direction of travel at the right (or, reversed, the left) end, from
    /// the mean position of the last few columns.
    fn end_direction(&self, right: bool) -> Option<[f64; 2]> {
        let e = self.end(right);
        let near: Vec<[f64; 2]> = self
            .pixels
            .iter()
            .map(|p| [p.0 as f64, p.1 as f64])
            .filter(|p| (p[0] - e[0]).abs() <= 6.0 && (p[0] - e[0]).abs() >= 3.0)
            .collect();
        if near.is_empty() {
            return None;
        }
        let m = [near.iter().map(|p| p[0]).sum::<f64>() / near.len() as f64, near.iter().map(|p| p[1]).sum::<f64>() / near.len() as f64];
        let sign = if right { 1.0 } else { -1.0 };
        Some([sign * (e[0] - m[0]).abs(), (e[1] - m[1]) * if right { 1.0 } else { -1.0 }])
    }
}

fn angle_between(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dot = a[0] * b[0] + a[1] * b[1];
    let n = a[0].hypot(a[1]) * b[0].hypot(b[1]);
    if n == 0.0 {
        0.0
    } else {
        (dot / n).clamp(-1.0, 1.0).acos().to_degrees()
    }
}

/// Line series from the line and knee heatmaps.
///
/// Raster pixels under the thresholded line heatmap that are neither
/// background nor `ink` are clustered by colour. Each colour is closed
/// morphologically, split into pieces, and pieces are stitched left to
/// right across gaps under `stitch_gap` whose direction stays within
/// `stitch_cone_degrees` of the piece's end direction. Stitched chains of one
/// colour that do not overlap in x form one series. Knee-heatmap peaks are
/// attached to the series passing closest to them and become its vertices.
pub fn extract_lines(
    det: &DetectorOutput,
    raster: &Raster,
    x_axis: Option<&AxisModel>,
    y_axis: Option<&AxisModel>,
    legend: &[LegendEntry],
    ink: Option<Color>,
    config: &AnalysisConfig,
) -> Vec<SeriesElement> {
    let Some(hm) = det.heatmap(HeatmapCategory::Line) else { return Vec::new() };
    let s = [raster.width() as f64 / hm.width() as f64, raster.height() as f64 / hm.height() as f64];
    let background = raster.mode_color();
    let mut coords = Vec::new();
    let mut colors = Vec::new();
    for y in 0..raster.height() {
        for x in 0..raster.width() {
            if hm.sample_bilinear(x as f64 / s[0], y as f64 / s[1]) < config.line_threshold {
                continue;
            }
            let c = raster.get(x, y);
            if c.distance(&background) <= config.color_merge_distance
                || ink.is_some_and(|k| c.distance(&k) <= config.color_merge_distance)
            {
                continue;
            }
            coords.push((x, y));
            colors.push(c);
        }
    }
    let (labels, centroids) = cluster_colors(&colors, config.color_merge_distance);
    let mut series: Vec<(Color, Vec<(u32, u32)>)> = Vec::new();
    for (k, c) in centroids.iter().enumerate() {
        let px: Vec<(u32, u32)> = coords.iter().zip(&labels).filter(|(_, &l)| l == k).map(|(p, _)| *p).collect();
        if px.len() < config.min_line_pixels {
            continue;
        }
        for chain in stitch(&px, config) {
            series.push((*c, chain));
        }
    }

    let knees: Vec<[f64; 2]> = det
        .heatmap(HeatmapCategory::LineKnee)
        .map(|kh| {
            local_maxima(kh, config.peak_threshold, config.peak_min_distance)
                .into_iter()
                .map(|p| {
                    let q = refine_peak(kh, p.x as u32, p.y as u32);
                    [q.x * s[0], q.y * s[1]]
                })
                .collect()
        })
        .unwrap_or_default();
    let mut vertices: Vec<Vec<[f64; 2]>> = vec![Vec::new(); series.len()];
    for k in &knees {
        let best = series
            .iter()
            .enumerate()
            .filter_map(|(i, (_, px))| {
                px.iter()
                    .map(|p| dist([p.0 as f64, p.1 as f64], *k))
                    .min_by(f64::total_cmp)
                    .filter(|&d| d <= config.knee_snap_distance)
                    .map(|d| (i, d))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((i, _)) = best {
            vertices[i].push(*k);
        }
    }

    let mut out: Vec<SeriesElement> = series
        .into_iter()
        .zip(vertices)
        .map(|((color, px), mut verts)| {
            let trace = column_trace(&px);
            verts.sort_by(|a, b| a[0].total_cmp(&b[0]));
            if verts.is_empty() {
                let step = (trace.len() / 10).max(1);
                verts = trace.iter().step_by(step).copied().collect();
            }
            let (points, calibrated) = map_points(&verts, x_axis, y_axis);
            SeriesElement {
                label: String::new(),
                label_source: Provenance::Positional,
                color,
                pixels: verts,
                trace,
                points,
                calibrated,
            }
        })
        .collect();
    assign_labels(&mut out, legend, config);
    out
}

fn column_trace(px: &[(u32, u32)]) -> Vec<[f64; 2]> {
    let mut cols: std::collections::BTreeMap<u32, (f64, f64)> = Default::default();
    for p in px {
        let e = cols.entry(p.0).or_insert((0.0, 0.0));
        e.0 += p.1 as f64;
        e.1 += 1.0;
    }
    cols.into_iter().map(|(x, (sy, n))| [x as f64, sy / n]).collect()
}

/// Columns two pieces of one line may share, where a crossing line hides
/// part of a steep stroke.
const OVERLAP: u32 = 3;

/// Shortest distance between the right end of `a` and the left end of `b`.
fn end_gap(a: &Piece, b: &Piece) -> f64 {
    let tail: Vec<&(u32, u32)> = a.pixels.iter().filter(|p| p.0 + 6 >= a.x_max).collect();
    b.pixels
        .iter()
        .filter(|p| p.0 <= b.x_min + 6)
        .flat_map(|p| tail.iter().map(move |q| (p.0 as f64 - q.0 as f64).hypot(p.1 as f64 - q.1 as f64)))
        .fold(f64::INFINITY, f64::min)
}

/// Pixels of one colour grouped into stitched chains; chains that do not
/// overlap in x are merged, since a line crosses each column once.
fn stitch(px: &[(u32, u32)], config: &AnalysisConfig) -> Vec<Vec<(u32, u32)>> {
    let x0 = px.iter().map(|p| p.0).min().unwrap_or(0).saturating_sub(2);
    let y0 = px.iter().map(|p| p.1).min().unwrap_or(0).saturating_sub(2);
    let w = px.iter().map(|p| p.0).max().unwrap_or(0) - x0 + 3;
    let h = px.iter().map(|p| p.1).max().unwrap_or(0) - y0 + 3;
    let mut mask = Mask::new(w, h);
    for p in px {
        mask.set(p.0 - x0, p.1 - y0, true);
    }
    let closed = morphology(&mask, MorphOp::Close, 1);
    let mut pieces: Vec<Piece> = connected_components(&closed)
        .into_iter()
        .map(|c| Piece {
            pixels: c.pixels.iter().map(|p| (p.0 + x0, p.1 + y0)).collect(),
            x_min: c.bbox.x_min + x0,
            x_max: c.bbox.x_max + x0,
        })
        .collect();
    pieces.sort_by_key(|p| (p.x_min, p.x_max));

    let mut chains: Vec<Vec<Piece>> = Vec::new();
    for piece in pieces {
        let target = chains
            .iter_mut()
            .filter_map(|chain| {
                let last = chain.last().unwrap();
                if last.x_max > piece.x_min + OVERLAP || piece.x_max <= last.x_max {
                    return None;
                }
                let d = end_gap(last, &piece);
                if d >= config.stitch_gap {
                    return None;
                }
                let (end, start) = (last.end(true), piece.end(false));
                let gap = [start[0] - end[0], start[1] - end[1]];
                let ok = gap[0].hypot(gap[1]) < 1.0
                    || last.end_direction(true).map_or(true, |dir| angle_between(dir, gap) <= config.stitch_cone_degrees);
                ok.then_some((chain, d))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match target {
            Some((chain, _)) => chain.push(piece),
            None => chains.push(vec![piece]),
        }
    }
    let mut spans: Vec<(u32, u32, Vec<(u32, u32)>)> = chains
        .into_iter()
        .map(|c| {
            let (a, b) = (c.first().unwrap().x_min, c.last().unwrap().x_max);
            (a, b, c.into_iter().flat_map(|p| p.pixels).collect::<Vec<_>>())
        })
        .filter(|c| c.2.len() >= config.min_line_pixels)
        .collect();
    spans.sort_by_key(|s| std::cmp::Reverse(s.2.len()));
    let mut merged: Vec<(Vec<(u32, u32)>, Vec<(u32, u32)>)> = Vec::new();
    for (a, b, px) in spans {
        match merged.iter_mut().find(|m| m.0.iter().all(|r| b < r.0 + OVERLAP || a + OVERLAP > r.1)) {
            Some(m) => {
                m.0.push((a, b));
                m.1.extend(px);
            }
            None => merged.push((vec![(a, b)], px)),
        }
    }
    merged.into_iter().map(|m| m.1).collect()
}

/// Scatter series: dot-heatmap peaks grouped by the raster colour under them.
pub fn extract_scatter(
    det: &DetectorOutput,
    raster: &Raster,
    x_axis: Option<&AxisModel>,
    y_axis: Option<&AxisModel>,
    legend: &[LegendEntry],
    config: &AnalysisConfig,
) -> Vec<SeriesElement> {
    let Some(hm) = det.heatmap(HeatmapCategory::ScatterDot) else { return Vec::new() };
    let s = [raster.width() as f64 / hm.width() as f64, raster.height() as f64 / hm.height() as f64];
    let background = raster.mode_color();
    let mut dots = Vec::new();
    let mut colors = Vec::new();
    for p in local_maxima(hm, config.peak_threshold, config.peak_min_distance) {
        let q = refine_peak(hm, p.x as u32, p.y as u32);
        let c = [q.x * s[0], q.y * s[1]];
        let (cx, cy) = (c[0].round() as i64, c[1].round() as i64);
        let around = (-1..=1).flat_map(|dy| (-1..=1).map(move |dx| (cx + dx, cy + dy)));
        let color = mode_of(around.filter_map(|(x, y)| raster.get_checked(x, y)).filter(|c| c.distance(&background) > 30.0))
            .map_or(background, |m| m.0);
        dots.push(c);
        colors.push(color);
    }
    let (labels, centroids) = cluster_colors(&colors, config.color_merge_distance);
    let mut out: Vec<SeriesElement> = centroids
        .iter()
        .enumerate()
        .map(|(k, color)| {
            let mut px: Vec<[f64; 2]> = dots.iter().zip(&labels).filter(|(_, &l)| l == k).map(|(d, _)| *d).collect();
            px.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
            let (points, calibrated) = map_points(&px, x_axis, y_axis);
            SeriesElement {
                label: String::new(),
                label_source: Provenance::Positional,
                color: *color,
                pixels: px,
                trace: Vec::new(),
                points,
                calibrated,
            }
        })
        .collect();
    assign_labels(&mut out, legend, config);
    out
}
