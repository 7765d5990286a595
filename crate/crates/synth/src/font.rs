//! The bundled 8x8 bitmap font, scaled by nearest-neighbour sampling and
//! drawable at any rotation.

use charter_core::{Color, Raster};
use font8x8::UnicodeFonts;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HAlign {
    Left,
    Center,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VAlign {
    Top,
    Middle,
    Bottom,
}

/// Width of `text` at glyph size `size`; every cell is square.
pub fn text_width(text: &str, size: f64) -> f64 {
    text.chars().count() as f64 * size
}

/// A positioned run of text.
///
/// `angle` is in degrees, counter-clockwise as seen on screen; the reading
/// direction is `(cos a, -sin a)` in image coordinates. `origin` is the
/// top-left corner of the text in its own frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TextPlacement {
    pub text: String,
    pub size: f64,
    pub angle: f64,
    pub origin: [f64; 2],
}

impl TextPlacement {
    /// Places text so that the alignment point of its own frame lands on `anchor`.
    pub fn anchored(text: &str, size: f64, anchor: [f64; 2], h: HAlign, v: VAlign, angle: f64) -> Self {
        let w = text_width(text, size);
        let la = match h {
            HAlign::Left => 0.0,
            HAlign::Center => w / 2.0,
            HAlign::Right => w,
        };
        let lb = match v {
            VAlign::Top => 0.0,
            VAlign::Middle => size / 2.0,
            VAlign::Bottom => size,
        };
        let (u, d) = frame(angle);
        let origin = [anchor[0] - la * u[0] - lb * d[0], anchor[1] - la * u[1] - lb * d[1]];
        Self { text: text.to_string(), size, angle, origin }
    }

    pub fn width(&self) -> f64 {
        text_width(&self.text, self.size)
    }

    pub fn height(&self) -> f64 {
        self.size
    }

    /// Corners in frame order: top-left, top-right, bottom-right, bottom-left.
    pub fn polygon(&self) -> [[f64; 2]; 4] {
        let (u, d) = frame(self.angle);
        let (w, h) = (self.width(), self.height());
        let o = self.origin;
        [
            o,
            [o[0] + w * u[0], o[1] + w * u[1]],
            [o[0] + w * u[0] + h * d[0], o[1] + w * u[1] + h * d[1]],
            [o[0] + h * d[0], o[1] + h * d[1]],
        ]
    }

    /// Axis-aligned bounds `[x_min, y_min, x_max, y_max]`.
    pub fn bbox(&self) -> [f64; 4] {
        polygon_bbox(&self.polygon())
    }

    pub fn draw(&self, raster: &mut Raster, color: Color) {
        let (u, d) = frame(self.angle);
        let [x0, y0, x1, y1] = self.bbox();
        let glyphs: Vec<[u8; 8]> =
            self.text.chars().map(|c| font8x8::BASIC_FONTS.get(c).unwrap_or([0; 8])).collect();
        let (w, h, s) = (self.width(), self.height(), self.size);
        for py in y0.floor() as i64..=y1.ceil() as i64 {
            for px in x0.floor() as i64..=x1.ceil() as i64 {
                let rx = px as f64 - self.origin[0];
                let ry = py as f64 - self.origin[1];
                let a = rx * u[0] + ry * u[1];
                let b = rx * d[0] + ry * d[1];
                if a < 0.0 || b < 0.0 || a >= w || b >= h {
                    continue;
                }
                let gi = ((a / s) as usize).min(glyphs.len() - 1);
                let col = (((a - gi as f64 * s) * 8.0 / s) as usize).min(7);
                let row = ((b * 8.0 / s) as usize).min(7);
                if glyphs[gi][row] & (1 << col) != 0 {
                    raster.put_checked(px, py, color);
                }
            }
        }
    }
}

/// Reading direction `u` and downward glyph direction `d` for an angle.
fn frame(angle: f64) -> ([f64; 2], [f64; 2]) {
    let t = angle.to_radians();
    let (s, c) = t.sin_cos();
    ([c, -s], [s, c])
}

pub fn polygon_bbox(poly: &[[f64; 2]; 4]) -> [f64; 4] {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for p in poly {
        b[0] = b[0].min(p[0]);
        b[1] = b[1].min(p[1]);
        b[2] = b[2].max(p[0]);
        b[3] = b[3].max(p[1]);
    }
    b
}

/// Separating-axis overlap test for two convex quadrilaterals, with
/// `margin` pixels of required clearance.
pub fn polygons_overlap(a: &[[f64; 2]; 4], b: &[[f64; 2]; 4], margin: f64) -> bool {
    for poly in [a, b] {
        for i in 0..4 {
            let p = poly[i];
            let q = poly[(i + 1) % 4];
            let (nx, ny) = (q[1] - p[1], p[0] - q[0]);
            let len = nx.hypot(ny);
            if len == 0.0 {
                continue;
            }
            let proj = |poly: &[[f64; 2]; 4]| {
                poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    let t = (v[0] * nx + v[1] * ny) / len;
                    (lo.min(t), hi.max(t))
                })
            };
            let (a0, a1) = proj(a);
            let (b0, b1) = proj(b);
            if a1 + margin <= b0 || b1 + margin <= a0 {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchored_alignment() {
        let t = TextPlacement::anchored("abc", 10.0, [100.0, 50.0], HAlign::Right, VAlign::Middle, 0.0);
        assert_eq!(t.bbox(), [70.0, 45.0, 100.0, 55.0]);
        let c = TextPlacement::anchored("ab", 8.0, [10.0, 10.0], HAlign::Center, VAlign::Top, 0.0);
        assert_eq!(c.bbox(), [2.0, 10.0, 18.0, 18.0]);
    }

    #[test]
    fn rotated_top_right_anchor_is_topmost_vertex() {
        let t = TextPlacement::anchored("label", 10.0, [200.0, 300.0], HAlign::Right, VAlign::Top, 45.0);
        let poly = t.polygon();
        let top = poly.iter().min_by(|a, b| a[1].total_cmp(&b[1])).unwrap();
        assert!((top[0] - 200.0).abs() < 1e-9 && (top[1] - 300.0).abs() < 1e-9);
        let v = TextPlacement::anchored("y", 10.0, [20.0, 200.0], HAlign::Center, VAlign::Middle, 90.0);
        let b = v.bbox();
        assert!((b[2] - b[0] - 10.0).abs() < 1e-9 && (b[3] - b[1] - 10.0).abs() < 1e-9);
    }

    #[test]
    fn ink_stays_inside_box() {
        let mut r = Raster::new(120, 60, Color::WHITE).unwrap();
        let t = TextPlacement::anchored("W8#", 12.0, [60.0, 30.0], HAlign::Center, VAlign::Middle, 30.0);
        t.draw(&mut r, Color::BLACK);
        let poly = t.polygon();
        let mut inked = 0;
        for y in 0..60 {
            for x in 0..120 {
                if r.get(x, y) == Color::BLACK {
                    inked += 1;
                    let p = [[x as f64, y as f64]; 4];
                    assert!(polygons_overlap(&poly, &p, 0.01), "ink at ({x},{y}) outside text polygon");
                }
            }
        }
        assert!(inked > 20);
    }

    #[test]
    fn overlap_test() {
        let a = TextPlacement::anchored("aaaa", 10.0, [0.0, 0.0], HAlign::Left, VAlign::Top, 0.0).polygon();
        let b = TextPlacement::anchored("bb", 10.0, [35.0, 5.0], HAlign::Left, VAlign::Top, 0.0).polygon();
        let c = TextPlacement::anchored("cc", 10.0, [45.0, 0.0], HAlign::Left, VAlign::Top, 0.0).polygon();
        assert!(polygons_overlap(&a, &b, 0.0));
        assert!(!polygons_overlap(&a, &c, 0.0));
        assert!(polygons_overlap(&a, &c, 6.0));
    }
}
