//! Pixel-exact drawing helpers (no anti-aliasing, so painted colours are
//! exactly the spec colours).

use charter_core::{Color, Raster};

use crate::texture::Texture;

/// Fills the pixels whose centres lie in the closed box.
pub(crate) fn fill_rect(r: &mut Raster, b: [f64; 4], color: Color, texture: Option<&Texture>) {
    for y in b[1].ceil() as i64..=b[3].floor() as i64 {
        for x in b[0].ceil() as i64..=b[2].floor() as i64 {
            let c = texture.map_or(color, |t| t.shade(color, x, y));
            r.put_checked(x, y, c);
        }
    }
}

pub(crate) fn rect_outline(r: &mut Raster, b: [f64; 4], width: f64, color: Color, dash: Option<(f64, f64)>) {
    let corners = [[b[0], b[1]], [b[2], b[1]], [b[2], b[3]], [b[0], b[3]], [b[0], b[1]]];
    polyline(r, &corners, width, color, dash);
}

/// Paints pixels within `width / 2` of the segment. Returns the arclength
/// consumed so dash phases continue across polyline vertices.
pub(crate) fn segment(
    r: &mut Raster,
    p: [f64; 2],
    q: [f64; 2],
    width: f64,
    color: Color,
    dash: Option<(f64, f64)>,
    phase: f64,
) -> f64 {
    let (dx, dy) = (q[0] - p[0], q[1] - p[1]);
    let len2 = dx * dx + dy * dy;
    let len = len2.sqrt();
    let half = width / 2.0;
    let x0 = (p[0].min(q[0]) - half).floor() as i64;
    let x1 = (p[0].max(q[0]) + half).ceil() as i64;
    let y0 = (p[1].min(q[1]) - half).floor() as i64;
    let y1 = (p[1].max(q[1]) + half).ceil() as i64;
    for y in y0..=y1 {
        for x in x0..=x1 {
            let (px, py) = (x as f64 - p[0], y as f64 - p[1]);
            let t = if len2 > 0.0 { ((px * dx + py * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
            let (ex, ey) = (px - t * dx, py - t * dy);
            if ex * ex + ey * ey > half * half {
                continue;
            }
            if let Some((on, off)) = dash {
                let s = (phase + t * len).rem_euclid(on + off);
                if s >= on {
                    continue;
                }
            }
            r.put_checked(x, y, color);
        }
    }
    len
}

pub(crate) fn polyline(r: &mut Raster, pts: &[[f64; 2]], width: f64, color: Color, dash: Option<(f64, f64)>) {
    let mut phase = 0.0;
    for w in pts.windows(2) {
        phase += segment(r, w[0], w[1], width, color, dash, phase);
    }
}

pub(crate) fn fill_circle(r: &mut Raster, c: [f64; 2], radius: f64, color: Color) {
    for y in (c[1] - radius).floor() as i64..=(c[1] + radius).ceil() as i64 {
        for x in (c[0] - radius).floor() as i64..=(c[0] + radius).ceil() as i64 {
            if (x as f64 - c[0]).hypot(y as f64 - c[1]) <= radius {
                r.put_checked(x, y, color);
            }
        }
    }
}
