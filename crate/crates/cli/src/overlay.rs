//! Debug overlays of recovered geometry.

use charter_analysis::AnalysisTrace;
use charter_core::{ChartType, Color, Raster};

pub const BOX_COLOR: Color = Color::new(230, 30, 30);
pub const CIRCLE_COLOR: Color = Color::new(255, 0, 255);
pub const RADIAL_COLOR: Color = Color::new(0, 160, 255);
pub const SERIES_COLOR: Color = Color::new(20, 200, 20);
const STROKE: f64 = 2.0;

/// Paints pixels whose centres lie within `width / 2` of segment `pq`.
pub fn stroke(r: &mut Raster, p: [f64; 2], q: [f64; 2], width: f64, color: Color) {
    let half = width / 2.0;
    let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
    let len2 = dx * dx + dy * dy;
    for y in (p[1].min(q[1]) - half).floor() as i64..=(p[1].max(q[1]) + half).ceil() as i64 {
        for x in (p[0].min(q[0]) - half).floor() as i64..=(p[0].max(q[0]) + half).ceil() as i64 {
            let (px, py) = (x as f64 - p[0], y as f64 - p[1]);
            let t = if len2 > 0.0 { ((px * dx + py * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
            if (px - t * dx).hypot(py - t * dy) <= half {
                r.put_checked(x, y, color);
            }
        }
    }
}

fn polar(c: [f64; 2], radius: f64, deg: f64) -> [f64; 2] {
    let (s, co) = deg.to_radians().sin_cos();
    [c[0] + radius * co, c[1] - radius * s]
}

pub fn circle(r: &mut Raster, c: [f64; 2], radius: f64, width: f64, color: Color) {
    let n = 720;
    for k in 0..n {
        let a = 360.0 * k as f64 / n as f64;
        let b = 360.0 * (k + 1) as f64 / n as f64;
        stroke(r, polar(c, radius, a), polar(c, radius, b), width, color);
    }
}

/// Draws bar boxes, pie circles with sector boundaries and series
/// polylines (scatter dots as crosses) over a copy of `raster`.
pub fn draw_overlay(raster: &Raster, trace: &AnalysisTrace) -> Raster {
    let mut out = raster.clone();
    for b in &trace.bars {
        let [x0, y0, x1, y1] = b.bbox;
        let corners = [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]];
        for w in corners.windows(2) {
            stroke(&mut out, w[0], w[1], STROKE, BOX_COLOR);
        }
    }
    for p in &trace.pies {
        if p.sectors.len() > 1 {
            for s in &p.sectors {
                stroke(&mut out, p.center, polar(p.center, p.radius, s.start), STROKE, RADIAL_COLOR);
            }
        }
        circle(&mut out, p.center, p.radius, STROKE, CIRCLE_COLOR);
    }
    let scatter = trace.chart_type == Some(ChartType::Scatter);
    for s in &trace.series {
        if scatter {
            for q in &s.pixels {
                stroke(&mut out, [q[0] - 4.0, q[1] - 4.0], [q[0] + 4.0, q[1] + 4.0], STROKE, SERIES_COLOR);
                stroke(&mut out, [q[0] - 4.0, q[1] + 4.0], [q[0] + 4.0, q[1] - 4.0], STROKE, SERIES_COLOR);
            }
        } else {
            for w in s.pixels.windows(2) {
                stroke(&mut out, w[0], w[1], STROKE, SERIES_COLOR);
            }
        }
    }
    out
}
