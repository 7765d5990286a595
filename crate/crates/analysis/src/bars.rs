//! Bar extraction from element boxes.

use charter_core::{iou, BBox, BoxCategory, ChartType, Color, Heatmap, HeatmapCategory, Provenance, Raster};
use charter_oracle::{numeric_tokens, DetectorOutput, OcrToken};
use serde::{Deserialize, Serialize};

use crate::legend::{match_legend, LegendEntry};
use crate::pixels::mode_in;
use crate::{AnalysisConfig, AnalysisError, AxisModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BarElement {
    pub bbox: [f64; 4],
    pub color: Color,
    /// Dominant colour covers less than `uniform_fraction` of the interior.
    pub textured: bool,
    pub label: String,
    pub label_source: Provenance,
    pub value: f64,
    pub value_source: Provenance,
    pub confidence: f64,
}

/// Bars of a vertical or horizontal bar chart, in reading order.
///
/// Boxes below `box_score_threshold` or overlapping a better box are
/// dropped; corners are refined against the bar-corner heatmaps; bars whose
/// width strays from the median or whose baseline leaves the modal baseline
/// are discarded. Values come from `axis` at the free edge, else from a
/// number printed at the bar end, else the bar length in pixels. Labels come
/// from text beside the baseline, else from the legend.
#[allow(clippy::too_many_arguments)]
pub fn extract_bars(
    det: &DetectorOutput,
    chart_type: ChartType,
    axis: Option<&AxisModel>,
    tokens: &[OcrToken],
    candidates: &[usize],
    raster: &Raster,
    legend: &[LegendEntry],
    config: &AnalysisConfig,
) -> Result<Vec<BarElement>, AnalysisError> {
    let vertical = match chart_type {
        ChartType::Vbar => true,
        ChartType::Hbar => false,
        other => return Err(AnalysisError::WrongChartType(other)),
    };
    let category = if vertical { BoxCategory::VerticalBar } else { BoxCategory::HorizontalBar };
    let mut boxes: Vec<BBox> = det.boxes_of(category).filter(|b| b.score >= config.box_score_threshold).cloned().collect();
    boxes.sort_by(|a, b| b.score.total_cmp(&a.score));
    let mut kept: Vec<BBox> = Vec::new();
    for b in boxes {
        if kept.iter().all(|k| iou(k, &b) <= 0.5) {
            kept.push(b);
        }
    }
    let kept: Vec<(BBox, [f64; 4])> = kept.into_iter().map(|b| (b.clone(), refine_corners(det, &b, config))).collect();

    let thickness = |r: &[f64; 4]| if vertical { r[2] - r[0] } else { r[3] - r[1] };
    let base = |r: &[f64; 4]| if vertical { r[3] } else { r[0] };
    let mut widths: Vec<f64> = kept.iter().map(|k| thickness(&k.1)).collect();
    widths.sort_by(f64::total_cmp);
    let Some(&median) = widths.get(widths.len() / 2) else { return Err(AnalysisError::NoElements("bar")) };
    let kept: Vec<_> =
        kept.into_iter().filter(|k| (thickness(&k.1) - median).abs() <= config.bar_width_tolerance * median).collect();
    let baselines: Vec<f64> = kept.iter().map(|k| base(&k.1)).collect();
    let support = |b: f64| baselines.iter().filter(|&&o| (o - b).abs() <= config.baseline_tolerance).count();
    let Some(mode) = baselines.iter().copied().max_by(|a, b| support(*a).cmp(&support(*b)).then(b.total_cmp(a)))
    else {
        return Err(AnalysisError::NoElements("bar"));
    };
    let cluster: Vec<f64> = baselines.iter().copied().filter(|o| (o - mode).abs() <= config.baseline_tolerance).collect();
    let baseline = cluster.iter().sum::<f64>() / cluster.len() as f64;
    let mut kept: Vec<_> =
        kept.into_iter().filter(|k| (base(&k.1) - baseline).abs() <= config.baseline_tolerance).collect();
    kept.sort_by(|a, b| if vertical { a.1[0].total_cmp(&b.1[0]) } else { a.1[1].total_cmp(&b.1[1]) });

    let centres: Vec<f64> = kept.iter().map(|k| if vertical { (k.1[0] + k.1[2]) / 2.0 } else { (k.1[1] + k.1[3]) / 2.0 }).collect();
    let pitch = if centres.len() > 1 {
        let mut gaps: Vec<f64> = centres.windows(2).map(|w| w[1] - w[0]).collect();
        gaps.sort_by(f64::total_cmp);
        gaps[gaps.len() / 2]
    } else {
        median * 1.5
    };

    let sub: Vec<OcrToken> = candidates.iter().map(|&i| tokens[i].clone()).collect();
    let numbers = numeric_tokens(&sub);
    let mut used = vec![false; candidates.len()];
    let mut bars = Vec::with_capacity(kept.len());
    for (k, (orig, r)) in kept.iter().enumerate() {
        let inner = shrink(r);
        let (color, share) = mode_in(raster, inner).unwrap_or((Color::BLACK, 0.0));
        let (value, value_source) = if let Some(a) = axis {
            (a.value_at(if vertical { r[1] } else { r[2] }), Provenance::AxisInterpolated)
        } else if let Some(n) = numbers.iter().filter(|n| value_token_fits(n.bbox, r, vertical)).min_by(|a, b| {
            gap_to_end(a.bbox, r, vertical).total_cmp(&gap_to_end(b.bbox, r, vertical))
        }) {
            for &i in &n.indices {
                used[i] = true;
            }
            (n.value, Provenance::ValueOnBar)
        } else {
            (if vertical { r[3] - r[1] } else { r[2] - r[0] }, Provenance::PixelSpace)
        };
        let centre = centres[k];
        let label = (0..sub.len())
            .filter(|&i| !used[i])
            .filter_map(|i| {
                let t = &sub[i];
                let p = attach_point(t, vertical);
                let (along, across) = if vertical { (p[0], p[1] - baseline) } else { (p[1], baseline - p[0]) };
                (across >= 0.0 && across <= 24.0 && (along - centre).abs() <= pitch / 2.0)
                    .then_some((i, (along - centre).abs() + across * 0.01))
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(i, _)| i);
        let (label, label_source) = match label {
            Some(i) => {
                used[i] = true;
                (sub[i].text.clone(), Provenance::AxisLabel)
            }
            None => (String::new(), Provenance::Positional),
        };
        bars.push(BarElement {
            bbox: *r,
            color,
            textured: share < config.uniform_fraction,
            label,
            label_source,
            value,
            value_source,
            confidence: orig.score,
        });
    }
    let colors: Vec<Option<Color>> = bars.iter().map(|b| (!b.textured).then_some(b.color)).collect();
    let matched = match_legend(legend, &colors, config);
    for (k, (b, m)) in bars.iter_mut().zip(matched).enumerate() {
        if b.label_source == Provenance::Positional {
            match m {
                Some(e) => {
                    b.label = legend[e].label.clone();
                    b.label_source = Provenance::Legend;
                }
                None => b.label = format!("bar_{}", k + 1),
            }
        }
    }
    if bars.is_empty() {
        return Err(AnalysisError::NoElements("bar"));
    }
    Ok(bars)
}

fn shrink(r: &[f64; 4]) -> [f64; 4] {
    let mx = ((r[2] - r[0]) * 0.2).max(1.0).min((r[2] - r[0]) / 2.0);
    let my = ((r[3] - r[1]) * 0.2).max(1.0).min((r[3] - r[1]) / 2.0);
    [r[0] + mx, r[1] + my, r[2] - mx, r[3] - my]
}

/// A number printed just past the free end of the bar, centred on it.
fn value_token_fits(t: [f64; 4], r: &[f64; 4], vertical: bool) -> bool {
    let c = [(t[0] + t[2]) / 2.0, (t[1] + t[3]) / 2.0];
    if vertical {
        c[0] >= r[0] && c[0] <= r[2] && t[3] <= r[1] + 2.0 && t[3] >= r[1] - 12.0
    } else {
        c[1] >= r[1] && c[1] <= r[3] && t[0] >= r[2] - 2.0 && t[0] <= r[2] + 12.0
    }
}

fn gap_to_end(t: [f64; 4], r: &[f64; 4], vertical: bool) -> f64 {
    if vertical {
        (r[1] - t[3]).abs()
    } else {
        (t[0] - r[2]).abs()
    }
}

/// Point of a category label nearest the axis: the top centre (or rotated
/// top-right corner, shifted back onto the bar centre) under vertical bars,
/// the middle of the right edge beside horizontal ones.
fn attach_point(t: &OcrToken, vertical: bool) -> [f64; 2] {
    let [a, b, c, _] = t.polygon;
    if !vertical {
        return [(b[0] + c[0]) / 2.0, (b[1] + c[1]) / 2.0];
    }
    if t.is_horizontal() {
        [(a[0] + b[0]) / 2.0, a[1].min(b[1])]
    } else {
        [b[0] - 2.0, b[1]]
    }
}

/// Box edges re-estimated from the four corner heatmaps; edges without a
/// nearby peak keep their box coordinate.
fn refine_corners(det: &DetectorOutput, b: &BBox, config: &AnalysisConfig) -> [f64; 4] {
    use HeatmapCategory::*;
    let find = |cat, x: f64, y: f64| -> Option<[f64; 2]> {
        let h = det.heatmap(cat)?;
        let s = [det.raster_size[0] as f64 / h.width() as f64, det.raster_size[1] as f64 / h.height() as f64];
        let p = window_peak(h, x / s[0], y / s[1], config.corner_snap_radius, config.peak_threshold)?;
        Some([p[0] * s[0], p[1] * s[1]])
    };
    let tl = find(BarTopLeft, b.x_min, b.y_min);
    let tr = find(BarTopRight, b.x_max, b.y_min);
    let bl = find(BarBottomLeft, b.x_min, b.y_max);
    let br = find(BarBottomRight, b.x_max, b.y_max);
    let avg = |a: Option<f64>, c: Option<f64>, fallback: f64| match (a, c) {
        (Some(a), Some(c)) => (a + c) / 2.0,
        (Some(v), None) | (None, Some(v)) => v,
        (None, None) => fallback,
    };
    let r = [
        avg(tl.map(|p| p[0]), bl.map(|p| p[0]), b.x_min),
        avg(tl.map(|p| p[1]), tr.map(|p| p[1]), b.y_min),
        avg(tr.map(|p| p[0]), br.map(|p| p[0]), b.x_max),
        avg(bl.map(|p| p[1]), br.map(|p| p[1]), b.y_max),
    ];
    if r[0] < r[2] && r[1] < r[3] {
        r
    } else {
        [b.x_min, b.y_min, b.x_max, b.y_max]
    }
}

/// Sub-pixel position of the strongest pixel within `radius` of `(x, y)`,
/// if it reaches `threshold` and is not on the window border.
pub(crate) fn window_peak(h: &Heatmap, x: f64, y: f64, radius: f64, threshold: f32) -> Option<[f64; 2]> {
    let r = radius.ceil() as i64;
    let (cx, cy) = (x.round() as i64, y.round() as i64);
    let mut best: Option<(i64, i64, f32)> = None;
    for py in cy - r..=cy + r {
        for px in cx - r..=cx + r {
            if px < 0 || py < 0 || px >= h.width() as i64 || py >= h.height() as i64 {
                continue;
            }
            let v = h.get(px as u32, py as u32);
            if best.map_or(true, |b| v > b.2) {
                best = Some((px, py, v));
            }
        }
    }
    let (px, py, v) = best?;
    if v < threshold || (px - cx).abs() == r || (py - cy).abs() == r {
        return None;
    }
    let p = charter_core::refine_peak(h, px as u32, py as u32);
    Some([p.x, p.y])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn splat(h: &mut Heatmap, cx: f64, cy: f64) {
        for y in 0..h.height() {
            for x in 0..h.width() {
                let d2 = (x as f64 - cx).powi(2) + (y as f64 - cy).powi(2);
                h.raise(x, y, (-d2 / 8.0).exp() as f32);
            }
        }
    }

    #[test]
    fn window_peak_is_subpixel() {
        let mut h = Heatmap::zeros(32, 32, HeatmapCategory::BarTopLeft).unwrap();
        splat(&mut h, 10.3, 12.6);
        let p = window_peak(&h, 11.0, 12.0, 3.0, 0.3).unwrap();
        assert!((p[0] - 10.3).abs() < 1e-3 && (p[1] - 12.6).abs() < 1e-3, "{p:?}");
        assert!(window_peak(&h, 20.0, 20.0, 3.0, 0.3).is_none());
    }
}
