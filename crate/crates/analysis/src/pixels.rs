//! Raster sampling helpers.

use std::collections::HashMap;

use charter_core::{Color, Raster};
use charter_oracle::OcrToken;

/// Most frequent colour among `colors` and its share; ties go to the
/// colour seen first.
pub fn mode_of(colors: impl IntoIterator<Item = Color>) -> Option<(Color, f64)> {
    let mut counts: HashMap<Color, (usize, usize)> = HashMap::new();
    let mut total = 0;
    for (i, c) in colors.into_iter().enumerate() {
        counts.entry(c).or_insert((0, i)).0 += 1;
        total += 1;
    }
    let (c, (n, _)) = counts.into_iter().max_by(|a, b| a.1 .0.cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))?;
    Some((c, n as f64 / total as f64))
}

/// Pixels whose centres lie in the closed box, clipped to the raster.
pub fn pixels_in(raster: &Raster, b: [f64; 4]) -> impl Iterator<Item = (u32, u32)> {
    let x0 = b[0].ceil().max(0.0) as i64;
    let y0 = b[1].ceil().max(0.0) as i64;
    let x1 = (b[2].floor() as i64).min(raster.width() as i64 - 1);
    let y1 = (b[3].floor() as i64).min(raster.height() as i64 - 1);
    (y0..=y1).flat_map(move |y| (x0..=x1).map(move |x| (x as u32, y as u32)))
}

/// Dominant colour of a box and the share of pixels that carry it.
pub fn mode_in(raster: &Raster, b: [f64; 4]) -> Option<(Color, f64)> {
    mode_of(pixels_in(raster, b).map(|(x, y)| raster.get(x, y)))
}

/// Text colour: the dominant non-background colour inside horizontal OCR
/// token boxes.
pub fn ink_color(raster: &Raster, tokens: &[OcrToken], background: Color) -> Option<Color> {
    let colors = tokens.iter().filter(|t| t.is_horizontal()).flat_map(|t| {
        pixels_in(raster, t.bbox()).map(|(x, y)| raster.get(x, y)).filter(|c| c.distance(&background) > 30.0)
    });
    mode_of(colors).map(|(c, _)| c)
}

pub fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Angle of `p` around `c` in degrees, counter-clockwise on screen, in `[0, 360)`.
pub fn screen_angle(c: [f64; 2], p: [f64; 2]) -> f64 {
    (-(p[1] - c[1])).atan2(p[0] - c[0]).to_degrees().rem_euclid(360.0)
}

/// Point at `deg` (counter-clockwise on screen) and distance `r` from `c`.
pub fn polar(c: [f64; 2], r: f64, deg: f64) -> [f64; 2] {
    let (sin, cos) = deg.to_radians().sin_cos();
    [c[0] + r * cos, c[1] - r * sin]
}

/// Closest point of a box to `p`.
pub fn closest_point(b: [f64; 4], p: [f64; 2]) -> [f64; 2] {
    [p[0].clamp(b[0], b[2]), p[1].clamp(b[1], b[3])]
}

pub fn box_distance(b: [f64; 4], p: [f64; 2]) -> f64 {
    dist(closest_point(b, p), p)
}

pub fn bbox_of(b: &charter_core::BBox) -> [f64; 4] {
    [b.x_min, b.y_min, b.x_max, b.y_max]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_prefers_first_on_ties() {
        let a = Color::new(1, 2, 3);
        let b = Color::new(9, 9, 9);
        assert_eq!(mode_of([b, a, a, b]), Some((b, 0.5)));
        assert_eq!(mode_of([a, b, b]).unwrap().0, b);
        assert_eq!(mode_of(std::iter::empty()), None);
    }

    #[test]
    fn angles_are_counter_clockwise() {
        let c = [10.0, 10.0];
        assert_eq!(screen_angle(c, [20.0, 10.0]), 0.0);
        assert!((screen_angle(c, [10.0, 0.0]) - 90.0).abs() < 1e-12);
        assert!((screen_angle(c, [10.0, 20.0]) - 270.0).abs() < 1e-12);
    }
}
