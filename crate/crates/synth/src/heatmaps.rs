//! Training-style heatmaps rendered from ground-truth geometry.
//!
//! Point fiducials are Gaussian splats of standard deviation
//! [`SPLAT_SIGMA`] heatmap pixels with peak 1. Curves are 1-pixel-wide
//! strokes blurred by the same kernel; the profile of a box of width 1
//! convolved with that Gaussian is approximated by a Gaussian of variance
//! `SPLAT_SIGMA² + 1/12`, rescaled to peak 1. Overlapping marks combine by
//! maximum.

use charter_core::{Heatmap, HeatmapCategory};
use serde::{Deserialize, Serialize};

use crate::truth::{polar, GroundTruth};
use crate::{Result, SynthError};

pub const SPLAT_SIGMA: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeatmapResolution {
    pub width: u32,
    pub height: u32,
}

impl Default for HeatmapResolution {
    fn default() -> Self {
        Self { width: 128, height: 128 }
    }
}

impl HeatmapResolution {
    /// Raster pixels per heatmap pixel along x and y.
    pub fn scale(&self, raster_size: [u32; 2]) -> Result<[f64; 2]> {
        let [rw, rh] = raster_size;
        if self.width == 0 || self.height == 0 || rw % self.width != 0 || rh % self.height != 0 {
            return Err(SynthError::Resolution {
                width: self.width,
                height: self.height,
                raster_width: rw,
                raster_height: rh,
            });
        }
        Ok([(rw / self.width) as f64, (rh / self.height) as f64])
    }
}

struct Grid {
    w: usize,
    h: usize,
    values: Vec<f32>,
}

impl Grid {
    fn raise_window(&mut self, bounds: [f64; 4], mut value_at: impl FnMut(f64, f64) -> f64) {
        let x0 = bounds[0].floor().max(0.0) as usize;
        let y0 = bounds[1].floor().max(0.0) as usize;
        let x1 = (bounds[2].ceil().max(-1.0) as i64).min(self.w as i64 - 1);
        let y1 = (bounds[3].ceil().max(-1.0) as i64).min(self.h as i64 - 1);
        if x1 < 0 || y1 < 0 {
            return;
        }
        for y in y0..=y1 as usize {
            for x in x0..=x1 as usize {
                let v = value_at(x as f64, y as f64) as f32;
                let cell = &mut self.values[y * self.w + x];
                if v > *cell {
                    *cell = v;
                }
            }
        }
    }

    fn splat(&mut self, p: [f64; 2]) {
        let reach = 4.0 * SPLAT_SIGMA;
        let k = 1.0 / (2.0 * SPLAT_SIGMA * SPLAT_SIGMA);
        self.raise_window([p[0] - reach, p[1] - reach, p[0] + reach, p[1] + reach], |x, y| {
            let d2 = (x - p[0]).powi(2) + (y - p[1]).powi(2);
            (-d2 * k).exp()
        });
    }

    fn stroke(&mut self, bounds: [f64; 4], dist: impl Fn(f64, f64) -> f64) {
        let s2 = SPLAT_SIGMA * SPLAT_SIGMA + 1.0 / 12.0;
        let reach = 4.0 * s2.sqrt();
        let k = 1.0 / (2.0 * s2);
        self.raise_window([bounds[0] - reach, bounds[1] - reach, bounds[2] + reach, bounds[3] + reach], |x, y| {
            let d = dist(x, y);
            (-d * d * k).exp()
        });
    }

    fn segment(&mut self, p: [f64; 2], q: [f64; 2]) {
        let bounds = [p[0].min(q[0]), p[1].min(q[1]), p[0].max(q[0]), p[1].max(q[1])];
        self.stroke(bounds, |x, y| segment_distance([x, y], p, q));
    }

    fn ring(&mut self, c: [f64; 2], r: f64) {
        self.stroke([c[0] - r, c[1] - r, c[0] + r, c[1] + r], |x, y| ((x - c[0]).hypot(y - c[1]) - r).abs());
    }
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 { (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
}

fn index(cat: HeatmapCategory) -> usize {
    HeatmapCategory::ALL.iter().position(|&c| c == cat).expect("category listed in ALL")
}

/// One heatmap per category, in [`HeatmapCategory::ALL`] order; categories
/// absent from the chart come back all zero.
pub fn emit_heatmaps(gt: &GroundTruth, resolution: HeatmapResolution) -> Result<Vec<Heatmap>> {
    let [sx, sy] = resolution.scale(gt.raster_size)?;
    let to_hm = |p: [f64; 2]| [p[0] / sx, p[1] / sy];
    let (w, h) = (resolution.width as usize, resolution.height as usize);
    let mut grids: Vec<Grid> =
        HeatmapCategory::ALL.iter().map(|_| Grid { w, h, values: vec![0.0; w * h] }).collect();
    let grid = index;

    const CORNERS: [HeatmapCategory; 4] = [
        HeatmapCategory::BarTopLeft,
        HeatmapCategory::BarTopRight,
        HeatmapCategory::BarBottomLeft,
        HeatmapCategory::BarBottomRight,
    ];
    for bar in &gt.bars {
        for (cat, p) in CORNERS.iter().zip(bar.corners()) {
            grids[grid(*cat)].splat(to_hm(p));
        }
    }
    for axis in gt.axes.iter().filter(|a| !a.hidden) {
        let cat = match axis.orientation {
            charter_core::Orientation::X => HeatmapCategory::XTick,
            charter_core::Orientation::Y => HeatmapCategory::YTick,
        };
        for t in &axis.ticks {
            grids[grid(cat)].splat(to_hm(t.position));
        }
    }
    for pie in &gt.pies {
        let c = to_hm(pie.center);
        grids[grid(HeatmapCategory::PieCenter)].splat(c);
        // Rings and rays are drawn in heatmap space; square pixels keep them circular.
        let r = pie.radius / sx;
        grids[grid(HeatmapCategory::PieCircumference)].ring(c, r);
        if pie.sectors.len() > 1 {
            for s in &pie.sectors {
                let edge = to_hm(polar(pie.center, pie.radius, s.start_deg));
                grids[grid(HeatmapCategory::PieRadial)].segment(c, edge);
                grids[grid(HeatmapCategory::PieCorner)].splat(edge);
            }
        }
    }
    for line in &gt.lines {
        let pts: Vec<[f64; 2]> = line.vertices.iter().map(|&p| to_hm(p)).collect();
        for &p in &pts {
            grids[grid(HeatmapCategory::LineKnee)].splat(p);
        }
        for pair in pts.windows(2) {
            grids[grid(HeatmapCategory::Line)].segment(pair[0], pair[1]);
        }
    }
    for s in &gt.scatter {
        for &p in &s.dots {
            grids[grid(HeatmapCategory::ScatterDot)].splat(to_hm(p));
        }
    }
    HeatmapCategory::ALL
        .iter()
        .zip(grids)
        .map(|(&cat, g)| Ok(Heatmap::from_values(resolution.width, resolution.height, g.values, cat)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{PieGt, SectorGt};
    use charter_core::{ChartTable, ChartType, Color};

    fn empty_gt(chart_type: ChartType) -> GroundTruth {
        GroundTruth {
            schema_version: crate::GT_SCHEMA_VERSION,
            chart_type,
            raster_size: [512, 512],
            table: ChartTable::new(chart_type),
            background: Color::WHITE,
            text_color: Color::BLACK,
            chart_region: [0.0, 0.0, 10.0, 10.0],
            plot_area: None,
            bars: vec![],
            pies: vec![],
            lines: vec![],
            scatter: vec![],
            axes: vec![],
            texts: vec![],
            legend: None,
            connectors: vec![],
        }
    }

    fn pie_gt(center: [f64; 2], radius: f64) -> GroundTruth {
        let mut gt = empty_gt(ChartType::Pie);
        gt.pies.push(PieGt {
            center,
            radius,
            sectors: vec![SectorGt {
                label: "a".into(),
                fraction: 1.0,
                start_deg: 0.0,
                end_deg: 360.0,
                color: Color::BLACK,
                textured: false,
                bbox: [0.0; 4],
            }],
        });
        gt
    }

    #[test]
    fn all_categories_emitted_and_empty_ones_zero() {
        let maps = emit_heatmaps(&empty_gt(ChartType::Vbar), HeatmapResolution::default()).unwrap();
        assert_eq!(maps.len(), 13);
        let center = maps.iter().find(|m| m.category() == HeatmapCategory::PieCenter).unwrap();
        assert_eq!(center.mass(), 0.0);
    }

    #[test]
    fn pie_center_peak_at_quarter_scale() {
        let maps = emit_heatmaps(&pie_gt([256.0, 256.0], 100.0), HeatmapResolution::default()).unwrap();
        let center = &maps[index(HeatmapCategory::PieCenter)];
        assert_eq!(center.argmax(), (64, 64, 1.0));
    }

    #[test]
    fn ring_mass_matches_radial_profile() {
        let maps = emit_heatmaps(&pie_gt([256.0, 256.0], 100.0), HeatmapResolution::default()).unwrap();
        let ring = &maps[index(HeatmapCategory::PieCircumference)];
        let (mut near, mut total) = (0.0, 0.0);
        for y in 0..128 {
            for x in 0..128 {
                let v = ring.get(x, y) as f64;
                total += v;
                if ((x as f64 - 64.0).hypot(y as f64 - 64.0) - 25.0).abs() <= 2.0 {
                    near += v;
                }
            }
        }
        // Independent estimate: the continuous stroke profile weighted by the
        // ring circumference, integrated numerically over the radius.
        let s = (SPLAT_SIGMA * SPLAT_SIGMA + 1.0 / 12.0).sqrt();
        let profile = |a: f64, b: f64| {
            let n = 4000;
            let dr = (b - a) / n as f64;
            (0..n)
                .map(|i| {
                    let rho = a + (i as f64 + 0.5) * dr;
                    (-(rho - 25.0).powi(2) / (2.0 * s * s)).exp() * rho * dr
                })
                .sum::<f64>()
        };
        let expected = profile(23.0, 27.0) / profile(25.0 - 4.0 * s, 25.0 + 4.0 * s);
        let frac = near / total;
        assert!((frac - expected).abs() < 0.03, "fraction {frac} vs {expected}");
        assert!(frac > 0.6);
    }

    #[test]
    fn resolution_must_divide_raster() {
        let r = emit_heatmaps(&empty_gt(ChartType::Line), HeatmapResolution { width: 100, height: 128 });
        assert!(matches!(r, Err(SynthError::Resolution { .. })));
    }
}
