//! Pie geometry, sectors and sector labels.

use charter_core::{
    connected_components, local_maxima, refine_peak, BBox, Color, Heatmap, HeatmapCategory, Mask, Provenance, Raster,
};
use charter_oracle::{DetectorOutput, OcrToken};
use serde::{Deserialize, Serialize};

use crate::legend::{match_legend, LegendEntry};
use crate::pixels::{closest_point, dist, mode_of, screen_angle};
use crate::AnalysisConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieMethod {
    /// Circle voting and radial-line histograms on the heatmaps.
    Heatmaps,
    /// Sector boxes only.
    Boxes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieSector {
    /// Degrees counter-clockwise from +x; `end > start`, `start` in `[0, 360)`.
    pub start: f64,
    pub end: f64,
    #[serde(default)]
    pub color: Option<Color>,
    #[serde(default)]
    pub textured: bool,
}

impl PieSector {
    pub fn span(&self) -> f64 {
        self.end - self.start
    }

    pub fn mid(&self) -> f64 {
        (self.start + self.end) / 2.0
    }

    pub fn contains(&self, deg: f64) -> bool {
        (deg - self.start).rem_euclid(360.0) < self.span()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieGeometry {
    /// Raster coordinates.
    pub center: [f64; 2],
    pub radius: f64,
    /// Circumference intensity in the 1-pixel band at the radius, relative to a full ring.
    pub support: f64,
    pub sectors: Vec<PieSector>,
}

fn scale_of(det: &DetectorOutput, h: &Heatmap) -> f64 {
    det.raster_size[0] as f64 / h.width() as f64
}

/// Circles from the centre and circumference heatmaps, strongest first.
///
/// Each centre peak votes circumference intensity into 1-pixel radius bins;
/// the winning bin is refined to sub-pixel precision by a mean shift with
/// weights `v / d` (undoing the ring's growth with radius). The centre moves
/// to the intensity centroid of the ring band and the radius is voted again.
pub fn fit_pies(det: &DetectorOutput, config: &AnalysisConfig) -> Vec<PieGeometry> {
    let (Some(ch), Some(ring)) = (det.heatmap(HeatmapCategory::PieCenter), det.heatmap(HeatmapCategory::PieCircumference))
    else {
        return Vec::new();
    };
    if ch.width() != ring.width() || ch.height() != ring.height() {
        return Vec::new();
    }
    let s = scale_of(det, ring);
    let pixels: Vec<([f64; 2], f64)> = (0..ring.height())
        .flat_map(|y| (0..ring.width()).map(move |x| (x, y)))
        .filter_map(|(x, y)| {
            let v = ring.get(x, y) as f64;
            (v >= config.peak_threshold as f64).then_some(([x as f64, y as f64], v))
        })
        .collect();
    let max_r = det.raster_size[0].min(det.raster_size[1]) as f64 / 2.0;
    let band = 2.0 * (4.0f64 + 1.0 / 12.0).sqrt();
    let mut out = Vec::new();
    for peak in local_maxima(ch, config.peak_threshold, config.peak_min_distance) {
        let p = refine_peak(ch, peak.x as u32, peak.y as u32);
        let mut c = [p.x, p.y];
        let Some(mut r) = vote_radius(&pixels, c, s, config.min_radius, max_r, band) else { continue };
        let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
        for (q, v) in &pixels {
            if (dist(*q, c) - r).abs() <= band {
                sx += q[0] * v;
                sy += q[1] * v;
                sw += v;
            }
        }
        if sw > 0.0 {
            c = [sx / sw, sy / sw];
            match vote_radius(&pixels, c, s, config.min_radius, max_r, band) {
                Some(r2) => r = r2,
                None => continue,
            }
        }
        let ring_sum: f64 = (0..ring.height())
            .flat_map(|y| (0..ring.width()).map(move |x| (x, y)))
            .filter(|&(x, y)| (dist([x as f64, y as f64], c) - r).abs() <= 0.5)
            .map(|(x, y)| ring.get(x, y) as f64)
            .sum();
        let support = ring_sum / (2.0 * std::f64::consts::PI * r);
        if support < config.circle_support {
            continue;
        }
        out.push(PieGeometry { center: [c[0] * s, c[1] * s], radius: r * s, support, sectors: Vec::new() });
    }
    out.sort_by(|a, b| b.support.total_cmp(&a.support));
    out
}

/// Radius in heatmap pixels around `c`; bins are 1 raster pixel wide.
fn vote_radius(pixels: &[([f64; 2], f64)], c: [f64; 2], s: f64, min_r: f64, max_r: f64, band: f64) -> Option<f64> {
    let bins = max_r.ceil() as usize + 1;
    let mut acc = vec![0.0; bins];
    for (q, v) in pixels {
        let d = dist(*q, c) * s;
        if d >= min_r && d <= max_r {
            acc[d.round() as usize] += v;
        }
    }
    let (best, &votes) = acc.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))?;
    if votes <= 0.0 {
        return None;
    }
    let mut r = best as f64 / s;
    for _ in 0..5 {
        let (mut num, mut den) = (0.0, 0.0);
        for (q, v) in pixels {
            let d = dist(*q, c);
            if (d - r).abs() <= band && d > 0.0 {
                num += v;
                den += v / d;
            }
        }
        if den <= 0.0 {
            break;
        }
        r = num / den;
    }
    Some(r)
}

/// Sector boundaries from the radial-line and corner heatmaps.
///
/// Rays from the centre are summed over 0.5 to 0.95 of the radius in 1°
/// steps; circular peaks above `sector_peak_fraction` of the maximum, merged
/// within `sector_merge_degrees`, are boundaries. A corner peak on the
/// circumference near a boundary fixes its angle; corner peaks with no
/// histogram peak nearby add boundaries of their own. Sector colours are
/// left unset.
pub fn extract_sectors(geom: &PieGeometry, det: &DetectorOutput, config: &AnalysisConfig) -> Vec<PieSector> {
    let mut bounds: Vec<(f64, f64)> = Vec::new();
    if let Some(radial) = det.heatmap(HeatmapCategory::PieRadial) {
        let s = scale_of(det, radial);
        let c = [geom.center[0] / s, geom.center[1] / s];
        let r = geom.radius / s;
        let hist: Vec<f64> = (0..360)
            .map(|k| {
                let (sin, cos) = (k as f64).to_radians().sin_cos();
                let mut sum = 0.0;
                let mut rho = 0.5 * r;
                while rho <= 0.95 * r {
                    sum += radial.sample_bilinear(c[0] + rho * cos, c[1] - rho * sin);
                    rho += 0.5;
                }
                sum
            })
            .collect();
        let max = hist.iter().copied().fold(0.0, f64::max);
        if max > 0.0 {
            for k in 0..360 {
                let (l, m, n) = (hist[(k + 359) % 360], hist[k], hist[(k + 1) % 360]);
                if m >= config.sector_peak_fraction * max && m > l && m >= n {
                    let denom = l - 2.0 * m + n;
                    let off = if denom < 0.0 { (0.5 * (l - n) / denom).clamp(-0.5, 0.5) } else { 0.0 };
                    bounds.push(((k as f64 + off).rem_euclid(360.0), m));
                }
            }
        }
    }
    bounds = merge_angles(bounds, config.sector_merge_degrees);

    if let Some(corner) = det.heatmap(HeatmapCategory::PieCorner) {
        let s = scale_of(det, corner);
        let c = [geom.center[0] / s, geom.center[1] / s];
        let r = geom.radius / s;
        let weight = bounds.iter().map(|b| b.1).fold(1.0, f64::max);
        for p in local_maxima(corner, config.peak_threshold, config.peak_min_distance) {
            let q = refine_peak(corner, p.x as u32, p.y as u32);
            if (dist([q.x, q.y], c) - r).abs() > 3.0 {
                continue;
            }
            let a = screen_angle(c, [q.x, q.y]);
            match bounds.iter_mut().filter(|b| angle_gap(b.0, a) <= 6.0).min_by(|x, y| {
                angle_gap(x.0, a).total_cmp(&angle_gap(y.0, a))
            }) {
                Some(b) => b.0 = a,
                None => bounds.push((a, weight)),
            }
        }
        bounds = merge_angles(bounds, config.sector_merge_degrees);
    }
    sectors_from_bounds(bounds.into_iter().map(|b| b.0).collect())
}

fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Merges angles closer than `window`, keeping the stronger one.
fn merge_angles(mut v: Vec<(f64, f64)>, window: f64) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    let mut out: Vec<(f64, f64)> = Vec::new();
    for b in v {
        if out.iter().all(|o| angle_gap(o.0, b.0) >= window) {
            out.push(b);
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Sectors between consecutive boundary angles; fewer than two boundaries
/// give one full circle. Spans sum to exactly 360°.
pub fn sectors_from_bounds(mut bounds: Vec<f64>) -> Vec<PieSector> {
    for b in &mut bounds {
        *b = b.rem_euclid(360.0);
    }
    bounds.sort_by(f64::total_cmp);
    bounds.dedup();
    if bounds.len() < 2 {
        let start = bounds.first().copied().unwrap_or(0.0);
        return vec![PieSector { start, end: start + 360.0, color: None, textured: false }];
    }
    let n = bounds.len();
    (0..n)
        .map(|i| {
            let start = bounds[i];
            let end = if i + 1 < n { bounds[i + 1] } else { bounds[0] + 360.0 };
            PieSector { start, end, color: None, textured: false }
        })
        .collect()
}

/// Dominant colour of each sector's interior (0.3 to 0.85 of the radius,
/// away from the boundaries).
pub fn sample_sector_colors(geom: &mut PieGeometry, raster: &Raster, config: &AnalysisConfig) {
    let [cx, cy] = geom.center;
    let r = geom.radius;
    let mut buckets: Vec<Vec<Color>> = vec![Vec::new(); geom.sectors.len()];
    let x0 = (cx - r).floor().max(0.0) as u32;
    let y0 = (cy - r).floor().max(0.0) as u32;
    let x1 = ((cx + r).ceil().max(0.0) as u32).min(raster.width().saturating_sub(1));
    let y1 = ((cy + r).ceil().max(0.0) as u32).min(raster.height().saturating_sub(1));
    for y in y0..=y1 {
        for x in x0..=x1 {
            let p = [x as f64, y as f64];
            let d = dist(p, geom.center);
            if d < 0.3 * r || d > 0.85 * r {
                continue;
            }
            let a = screen_angle(geom.center, p);
            for (k, s) in geom.sectors.iter().enumerate() {
                let margin = (s.span() / 4.0).min(3.0);
                if (a - s.start - margin).rem_euclid(360.0) < s.span() - 2.0 * margin {
                    buckets[k].push(raster.get(x, y));
                }
            }
        }
    }
    for (s, b) in geom.sectors.iter_mut().zip(buckets) {
        if let Some((c, share)) = mode_of(b) {
            s.color = Some(c);
            s.textured = share < config.uniform_fraction;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorLabel {
    pub label: String,
    pub source: Provenance,
}

/// Labels for the sectors of `geom` by exactly one strategy: legend colours
/// when a legend was read, else connector strokes crossing the rim, else
/// text placed at the sector's angle. `candidates` index the tokens that
/// may serve as labels; `ink` is the text colour.
pub fn label_sectors(
    geom: &PieGeometry,
    raster: &Raster,
    tokens: &[OcrToken],
    candidates: &[usize],
    legend: &[LegendEntry],
    ink: Option<Color>,
    config: &AnalysisConfig,
) -> Vec<SectorLabel> {
    let n = geom.sectors.len();
    let mut labels: Vec<Option<SectorLabel>> = vec![None; n];
    if !legend.is_empty() {
        let colors: Vec<Option<Color>> = geom.sectors.iter().map(|s| s.color.filter(|_| !s.textured)).collect();
        for (k, m) in match_legend(legend, &colors, config).into_iter().enumerate() {
            labels[k] = m.map(|e| SectorLabel { label: legend[e].label.clone(), source: Provenance::Legend });
        }
    } else {
        let connectors = ink.map(|k| find_connectors(geom, raster, tokens, candidates, k, config)).unwrap_or_default();
        if !connectors.is_empty() {
            let mut used = vec![false; tokens.len()];
            for (inner, outer) in connectors {
                let a = screen_angle(geom.center, inner);
                let Some(k) = geom.sectors.iter().position(|s| s.contains(a)) else { continue };
                if labels[k].is_some() {
                    continue;
                }
                let nearest = candidates
                    .iter()
                    .copied()
                    .filter(|&i| !used[i])
                    .map(|i| (i, crate::pixels::box_distance(tokens[i].bbox(), outer)))
                    .filter(|&(i, d)| d <= 2.0 * tokens[i].text_height().max(8.0))
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                if let Some((i, _)) = nearest {
                    let line = grow_line(tokens, candidates, i, &mut used);
                    labels[k] = Some(SectorLabel { label: line, source: Provenance::Connector });
                }
            }
        } else {
            adjacent_labels(geom, tokens, candidates, config, &mut labels);
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(k, l)| l.unwrap_or_else(|| SectorLabel { label: format!("sector_{}", k + 1), source: Provenance::Positional }))
        .collect()
}

/// Ink strokes crossing the rim, small against the disc and not part of any
/// token; returned as (innermost, outermost) pixel.
fn find_connectors(
    geom: &PieGeometry,
    raster: &Raster,
    tokens: &[OcrToken],
    candidates: &[usize],
    ink: Color,
    config: &AnalysisConfig,
) -> Vec<([f64; 2], [f64; 2])> {
    let r = geom.radius;
    let x0 = (geom.center[0] - 1.4 * r).floor().max(0.0) as u32;
    let y0 = (geom.center[1] - 1.4 * r).floor().max(0.0) as u32;
    let x1 = ((geom.center[0] + 1.4 * r).ceil().max(0.0) as u32).min(raster.width().saturating_sub(1));
    let y1 = ((geom.center[1] + 1.4 * r).ceil().max(0.0) as u32).min(raster.height().saturating_sub(1));
    if x1 <= x0 || y1 <= y0 {
        return Vec::new();
    }
    let boxes: Vec<[f64; 4]> = candidates.iter().map(|&i| tokens[i].bbox()).collect();
    let mask = Mask::from_fn(x1 - x0 + 1, y1 - y0 + 1, |x, y| {
        let (px, py) = ((x0 + x) as f64, (y0 + y) as f64);
        raster.get(x0 + x, y0 + y).distance(&ink) < 40.0
            && !boxes.iter().any(|b| px >= b[0] - 1.0 && px <= b[2] + 1.0 && py >= b[1] - 1.0 && py <= b[3] + 1.0)
    });
    let limit = config.connector_area_fraction * std::f64::consts::PI * r * r;
    let mut out = Vec::new();
    for comp in connected_components(&mask) {
        if comp.area() as f64 >= limit {
            continue;
        }
        let pts = comp.pixels.iter().map(|&(x, y)| [(x0 + x) as f64, (y0 + y) as f64]);
        let inner = pts.clone().min_by(|a, b| dist(*a, geom.center).total_cmp(&dist(*b, geom.center))).unwrap();
        let outer = pts.max_by(|a, b| dist(*a, geom.center).total_cmp(&dist(*b, geom.center))).unwrap();
        if dist(inner, geom.center) < r - 2.0 && dist(outer, geom.center) > r + 2.0 {
            out.push((inner, outer));
        }
    }
    out
}

/// Token `i` joined with same-line neighbours separated by less than half a
/// text height, left to right.
fn grow_line(tokens: &[OcrToken], candidates: &[usize], i: usize, used: &mut [bool]) -> String {
    let mut line = vec![i];
    used[i] = true;
    loop {
        let mut grew = false;
        for &j in candidates {
            if used[j] || !tokens[j].is_horizontal() {
                continue;
            }
            let b = tokens[j].bbox();
            let h = tokens[i].text_height();
            let joins = line.iter().any(|&k| {
                let a = tokens[k].bbox();
                let same_row = ((a[1] + a[3]) - (b[1] + b[3])).abs() / 2.0 <= 0.3 * h;
                let gap = (b[0] - a[2]).max(a[0] - b[2]);
                same_row && gap <= 0.5 * h
            });
            if joins {
                used[j] = true;
                line.push(j);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    line.sort_by(|a, b| tokens[*a].bbox()[0].total_cmp(&tokens[*b].bbox()[0]));
    line.iter().map(|&k| tokens[k].text.as_str()).collect::<Vec<_>>().join(" ")
}

/// Each sector takes the token at its angle: tokens inside the disc first,
/// then the closest to the sector's mid-angle. Outside tokens are located by
/// their point nearest the centre.
fn adjacent_labels(
    geom: &PieGeometry,
    tokens: &[OcrToken],
    candidates: &[usize],
    config: &AnalysisConfig,
    labels: &mut [Option<SectorLabel>],
) {
    let mut pairs = Vec::new();
    for &i in candidates {
        let b = tokens[i].bbox();
        let near = closest_point(b, geom.center);
        let d = dist(near, geom.center);
        if d > config.adjacent_radius_factor * geom.radius {
            continue;
        }
        let inside = dist(tokens[i].center(), geom.center) < geom.radius;
        let a = if inside || d < 1.0 { screen_angle(geom.center, tokens[i].center()) } else { screen_angle(geom.center, near) };
        for (k, s) in geom.sectors.iter().enumerate() {
            if s.contains(a) {
                pairs.push((!inside, angle_gap(a, s.mid()), k, i));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)).then(x.3.cmp(&y.3)));
    let mut used = vec![false; tokens.len()];
    for (_, _, k, i) in pairs {
        if labels[k].is_none() && !used[i] {
            used[i] = true;
            labels[k] = Some(SectorLabel { label: tokens[i].text.clone(), source: Provenance::AdjacentText });
        }
    }
}

/// Baseline pie from sector boxes alone: the circle inscribed in the union
/// of the accepted boxes, and per box the arc of that circle inside it.
/// Neighbouring arcs meet halfway across gaps and overlaps, so a missed
/// sector is absorbed by its neighbours. Boxes holding the whole circle
/// carry no boundary information and leave the largest gaps as sectors of
/// their own.
pub fn pie_from_boxes(boxes: &[BBox], config: &AnalysisConfig) -> Option<PieGeometry> {
    let accepted: Vec<&BBox> = boxes.iter().filter(|b| b.score >= config.box_score_threshold).collect();
    let first = accepted.first()?;
    let mut u = [first.x_min, first.y_min, first.x_max, first.y_max];
    for b in &accepted {
        u = [u[0].min(b.x_min), u[1].min(b.y_min), u[2].max(b.x_max), u[3].max(b.y_max)];
    }
    let center = [(u[0] + u[2]) / 2.0, (u[1] + u[3]) / 2.0];
    let radius = (u[2] - u[0]).min(u[3] - u[1]) / 2.0;
    if radius <= 0.0 {
        return None;
    }
    const STEP: f64 = 0.1;
    let steps = (360.0 / STEP) as usize;
    let mut arcs: Vec<(f64, f64)> = Vec::new();
    let mut whole = 0;
    for b in &accepted {
        let inside: Vec<bool> = (0..steps)
            .map(|k| {
                let p = crate::pixels::polar(center, radius, k as f64 * STEP);
                p[0] >= b.x_min - 0.5 && p[0] <= b.x_max + 0.5 && p[1] >= b.y_min - 0.5 && p[1] <= b.y_max + 0.5
            })
            .collect();
        let count = inside.iter().filter(|&&v| v).count();
        if count == steps {
            whole += 1;
            continue;
        }
        if count == 0 {
            continue;
        }
        // Longest circular run of inside samples.
        let (mut best, mut best_start, mut run, mut run_start) = (0, 0, 0, 0);
        for k in 0..2 * steps {
            if inside[k % steps] {
                if run == 0 {
                    run_start = k;
                }
                run += 1;
                if run > best && run <= steps {
                    best = run;
                    best_start = run_start;
                }
            } else {
                run = 0;
            }
        }
        let start = (best_start as f64 * STEP).rem_euclid(360.0);
        arcs.push((start, start + (best - 1) as f64 * STEP));
    }
    let sectors = if arcs.is_empty() {
        sectors_from_bounds(Vec::new())
    } else {
        arcs.sort_by(|a, b| ((a.0 + a.1) / 2.0).rem_euclid(360.0).total_cmp(&((b.0 + b.1) / 2.0).rem_euclid(360.0)));
        let n = arcs.len();
        let mut gaps: Vec<(f64, usize)> = (0..n)
            .map(|i| {
                let end = arcs[i].1;
                let next = arcs[(i + 1) % n].0;
                ((next - end).rem_euclid(360.0), i)
            })
            .collect();
        let mut bounds = Vec::new();
        gaps.sort_by(|a, b| b.0.total_cmp(&a.0));
        let split: Vec<usize> = gaps.iter().take(whole).filter(|g| g.0 > 5.0).map(|g| g.1).collect();
        for i in 0..n {
            let end = arcs[i].1;
            let next = arcs[(i + 1) % n].0;
            let mut d = (next - end).rem_euclid(360.0);
            if d > 180.0 && !split.contains(&i) {
                d -= 360.0;
            }
            if split.contains(&i) {
                bounds.push(end);
                bounds.push(next);
            } else {
                bounds.push(end + d / 2.0);
            }
        }
        if n == 1 && split.is_empty() {
            bounds = vec![arcs[0].0, arcs[0].1];
        }
        sectors_from_bounds(bounds)
    };
    Some(PieGeometry { center, radius, support: 1.0, sectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use charter_core::BoxCategory;

    #[test]
    fn spans_from_bounds() {
        let s = sectors_from_bounds(vec![180.0, 0.0, 288.0]);
        let spans: Vec<f64> = s.iter().map(|s| s.span()).collect();
        assert_eq!(spans, vec![180.0, 108.0, 72.0]);
        assert_eq!(sectors_from_bounds(vec![]).len(), 1);
        assert_eq!(sectors_from_bounds(vec![42.0])[0].span(), 360.0);
    }

    #[test]
    fn sector_contains_wraps() {
        let s = PieSector { start: 300.0, end: 400.0, color: None, textured: false };
        assert!(s.contains(10.0) && s.contains(300.0) && !s.contains(41.0));
    }

    fn quarter_boxes(c: [f64; 2], r: f64) -> Vec<BBox> {
        let b = |x0, y0, x1, y1| BBox::new(x0, y0, x1, y1, BoxCategory::PieSector, 0.9).unwrap();
        vec![
            b(c[0], c[1] - r, c[0] + r, c[1]),
            b(c[0] - r, c[1] - r, c[0], c[1]),
            b(c[0] - r, c[1], c[0], c[1] + r),
            b(c[0], c[1], c[0] + r, c[1] + r),
        ]
    }

    #[test]
    fn boxes_enclosing_quarters() {
        let g = pie_from_boxes(&quarter_boxes([200.0, 200.0], 100.0), &AnalysisConfig::default()).unwrap();
        assert_eq!(g.center, [200.0, 200.0]);
        assert_eq!(g.radius, 100.0);
        assert_eq!(g.sectors.len(), 4);
        for s in &g.sectors {
            assert!((s.span() - 90.0).abs() <= 3.0, "{s:?}");
        }
        assert!(pie_from_boxes(&[], &AnalysisConfig::default()).is_none());
    }

    #[test]
    fn missed_box_is_absorbed() {
        let mut boxes = quarter_boxes([200.0, 200.0], 100.0);
        boxes.remove(1);
        let g = pie_from_boxes(&boxes, &AnalysisConfig::default()).unwrap();
        assert_eq!(g.sectors.len(), 3);
        let total: f64 = g.sectors.iter().map(|s| s.span()).sum();
        assert!((total - 360.0).abs() < 1e-9);
        assert!(g.sectors.iter().any(|s| s.span() > 120.0));
    }

    #[test]
    fn adjacent_token_inside_span() {
        let geom = PieGeometry {
            center: [100.0, 100.0],
            radius: 50.0,
            support: 1.0,
            sectors: sectors_from_bounds(vec![60.0, 120.0]),
        };
        let t = vec![OcrToken::axis_aligned("Top", [90.0, 30.0, 110.0, 40.0])];
        let r = Raster::new(200, 200, Color::WHITE).unwrap();
        let labels = label_sectors(&geom, &r, &t, &[0], &[], None, &AnalysisConfig::default());
        assert_eq!(labels[0].label, "Top");
        assert_eq!(labels[0].source, Provenance::AdjacentText);
        assert_eq!(labels[1].label, "sector_2");
    }
}
