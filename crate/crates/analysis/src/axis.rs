//! Axis recovery from numeric tick labels.

use charter_core::{AxisScale, Orientation};
use charter_oracle::{numeric_tokens, OcrToken};
use serde::{Deserialize, Serialize};

use crate::AnalysisConfig;

/// Affine map from pixel position along an axis to `scale.forward(value)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisModel {
    pub orientation: Orientation,
    pub scale: AxisScale,
    pub slope: f64,
    pub intercept: f64,
    /// `(pixel, value)` pairs the fit rests on, ordered by pixel.
    pub support: Vec<[f64; 2]>,
    #[serde(default)]
    pub title: Option<String>,
}

impl AxisModel {
    pub fn value_at(&self, pixel: f64) -> f64 {
        self.scale.inverse(self.slope * pixel + self.intercept)
    }

    pub fn pixel_at(&self, value: f64) -> f64 {
        (self.scale.forward(value) - self.intercept) / self.slope
    }

    /// Smallest and largest supporting value.
    pub fn value_range(&self) -> Option<[f64; 2]> {
        let lo = self.support.iter().map(|s| s[1]).fold(f64::INFINITY, f64::min);
        let hi = self.support.iter().map(|s| s[1]).fold(f64::NEG_INFINITY, f64::max);
        (lo <= hi).then_some([lo, hi])
    }
}

struct Candidate {
    /// Position along the axis.
    along: f64,
    /// Left/centre/right (y axis) or top/centre/bottom (x axis) of the label.
    keys: [f64; 3],
    value: f64,
    exponent: bool,
}

/// Fits an axis to the numeric labels in `tokens`.
///
/// Labels are binned by their across-axis edges and centre (bin width
/// `axis_bin_factor` times the median label height); the fullest bin's
/// longest strictly monotone run is fitted by least squares, dropping the
/// worst point while its residual exceeds `axis_residual_tolerance`.
/// Exponent labels switch the fit to log10. `tick_peaks` (raster
/// coordinates along the axis) pull support points onto nearby tick marks.
pub fn recover_axis(
    tokens: &[OcrToken],
    orientation: Orientation,
    tick_peaks: &[f64],
    config: &AnalysisConfig,
) -> Option<AxisModel> {
    let mut cands: Vec<Candidate> = numeric_tokens(tokens)
        .into_iter()
        .filter(|n| n.value.is_finite() && tokens[n.indices[0]].is_horizontal())
        .map(|n| {
            let m = tokens[n.indices[0]].bbox();
            match orientation {
                Orientation::Y => Candidate {
                    along: n.anchor[1],
                    keys: [m[2], (m[0] + m[2]) / 2.0, m[0]],
                    value: n.value,
                    exponent: n.exponent,
                },
                Orientation::X => Candidate {
                    along: n.anchor[0],
                    keys: [m[1], (m[1] + m[3]) / 2.0, m[3]],
                    value: n.value,
                    exponent: n.exponent,
                },
            }
        })
        .collect();
    if cands.len() < 2 {
        return None;
    }
    cands.sort_by(|a, b| a.along.total_cmp(&b.along).then(a.value.total_cmp(&b.value)));
    let mut heights: Vec<f64> = numeric_tokens(tokens).iter().map(|n| n.height).collect();
    heights.sort_by(f64::total_cmp);
    let bin = config.axis_bin_factor * heights[heights.len() / 2];

    let mut best: Vec<usize> = Vec::new();
    for k in 0..3 {
        let mut starts: Vec<f64> = cands.iter().map(|c| c.keys[k]).collect();
        starts.sort_by(f64::total_cmp);
        for s in starts {
            let members: Vec<usize> =
                (0..cands.len()).filter(|&i| cands[i].keys[k] >= s && cands[i].keys[k] <= s + bin).collect();
            let run = monotone_run(&members, &cands, orientation);
            if run.len() > best.len() {
                best = run;
            }
        }
    }
    if best.len() < 2 {
        return None;
    }

    let log = best.iter().filter(|&&i| cands[i].exponent).count() * 2 > best.len()
        && best.iter().all(|&i| cands[i].value > 0.0);
    let scale = if log { AxisScale::Log10 } else { AxisScale::Linear };
    let mut support: Vec<[f64; 2]> = best
        .iter()
        .map(|&i| {
            let c = &cands[i];
            let snapped = tick_peaks
                .iter()
                .copied()
                .filter(|p| (p - c.along).abs() <= config.tick_snap_radius)
                .min_by(|a, b| (a - c.along).abs().total_cmp(&(b - c.along).abs()));
            [snapped.unwrap_or(c.along), c.value]
        })
        .collect();

    loop {
        let (slope, intercept) = least_squares(&support, scale)?;
        let residual = |s: &[f64; 2]| ((scale.forward(s[1]) - intercept) / slope - s[0]).abs();
        let (worst, r) = support
            .iter()
            .enumerate()
            .map(|(i, s)| (i, residual(s)))
            .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))?;
        if r <= config.axis_residual_tolerance {
            return Some(AxisModel { orientation, scale, slope, intercept, support, title: None });
        }
        if support.len() <= 2 {
            return None;
        }
        support.remove(worst);
    }
}

/// Longest strictly monotone subsequence of `members` (already in pixel
/// order), in the direction values normally run for the orientation first.
fn monotone_run(members: &[usize], cands: &[Candidate], orientation: Orientation) -> Vec<usize> {
    let inc = longest_run(members, |a, b| cands[a].value < cands[b].value && cands[a].along < cands[b].along);
    let dec = longest_run(members, |a, b| cands[a].value > cands[b].value && cands[a].along < cands[b].along);
    match orientation {
        Orientation::X if inc.len() >= dec.len() => inc,
        Orientation::Y if dec.len() >= inc.len() => dec,
        Orientation::X => dec,
        Orientation::Y => inc,
    }
}

fn longest_run(seq: &[usize], before: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    let n = seq.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for j in 0..n {
        for i in 0..j {
            if before(seq[i], seq[j]) && len[i] + 1 > len[j] {
                len[j] = len[i] + 1;
                prev[j] = i;
            }
        }
    }
    let Some(mut end) = (0..n).max_by(|&a, &b| len[a].cmp(&len[b]).then(b.cmp(&a))) else {
        return Vec::new();
    };
    let mut out = vec![seq[end]];
    while prev[end] != usize::MAX {
        end = prev[end];
        out.push(seq[end]);
    }
    out.reverse();
    out
}

fn least_squares(points: &[[f64; 2]], scale: AxisScale) -> Option<(f64, f64)> {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), p| (a + p[0], b + scale.forward(p[1])));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for p in points {
        let dx = p[0] - mx;
        sxx += dx * dx;
        sxy += dx * (scale.forward(p[1]) - my);
    }
    let slope = sxy / sxx;
    (sxx > 0.0 && slope.is_finite() && slope != 0.0).then_some((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ytick(text: &str, y: f64) -> OcrToken {
        OcrToken::axis_aligned(text, [80.0 - 6.0 * text.len() as f64, y - 5.0, 80.0, y + 5.0])
    }

    #[test]
    fn three_ticks() {
        let t = [ytick("0", 400.0), ytick("10", 300.0), ytick("20", 200.0)];
        let a = recover_axis(&t, Orientation::Y, &[], &AnalysisConfig::default()).unwrap();
        assert!((a.slope + 0.1).abs() < 1e-12);
        assert!((a.intercept - 40.0).abs() < 1e-9);
        assert_eq!(a.scale, AxisScale::Linear);
        assert!((a.value_at(250.0) - 15.0).abs() < 1e-9);
    }

    #[test]
    fn misread_label_is_dropped() {
        let t = [ytick("0", 400.0), ytick("10", 300.0), ytick("80", 200.0), ytick("30", 100.0)];
        let a = recover_axis(&t, Orientation::Y, &[], &AnalysisConfig::default()).unwrap();
        assert_eq!(a.support.len(), 3);
        assert!((a.value_at(200.0) - 20.0).abs() < 1e-9);
    }

    #[test]
    fn scattered_numbers_give_no_axis() {
        let t = [
            OcrToken::axis_aligned("5", [10.0, 10.0, 16.0, 20.0]),
            OcrToken::axis_aligned("7", [100.0, 50.0, 106.0, 60.0]),
        ];
        assert!(recover_axis(&t, Orientation::Y, &[], &AnalysisConfig::default()).is_none());
        assert!(recover_axis(&t[..1], Orientation::X, &[], &AnalysisConfig::default()).is_none());
    }

    #[test]
    fn exponent_labels_fit_log_axis() {
        let mut t = Vec::new();
        for (k, x) in [(1, 100.0), (2, 200.0), (3, 300.0)] {
            t.push(OcrToken::axis_aligned("10", [x - 12.0, 410.0, x + 2.0, 422.0]));
            t.push(OcrToken::axis_aligned(&k.to_string(), [x + 3.0, 407.0, x + 8.0, 414.0]));
        }
        let a = recover_axis(&t, Orientation::X, &[], &AnalysisConfig::default()).unwrap();
        assert_eq!(a.scale, AxisScale::Log10);
        // Anchors sit at the centre of mantissa plus exponent, 2 px left of x.
        assert!((a.value_at(248.0) - 10f64.powf(2.5)).abs() < 1e-6);
    }

    #[test]
    fn snaps_to_tick_peaks() {
        let t = [ytick("0", 401.0), ytick("10", 300.0), ytick("20", 199.0)];
        let a = recover_axis(&t, Orientation::Y, &[400.0, 300.0, 200.0], &AnalysisConfig::default()).unwrap();
        assert!((a.slope + 0.1).abs() < 1e-12);
    }
}
