//! Binary grids: 8-connected components and square-element morphology.

use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq)]
pub struct Mask {
    width: u32,
    height: u32,
    data: Vec<bool>,
}

impl std::fmt::Debug for Mask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Mask")
            .field("width", &self.width)
            .field("height", &self.height)
            .field("count", &self.count())
            .finish()
    }
}

impl Mask {
    pub fn new(width: u32, height: u32) -> Self {
        Self { width, height, data: vec![false; width as usize * height as usize] }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut m = Self::new(width, height);
        for y in 0..height {
            for x in 0..width {
                if f(x, y) {
                    m.set(x, y, true);
                }
            }
        }
        m
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> bool {
        self.data[y as usize * self.width as usize + x as usize]
    }

    #[inline]
    pub fn get_checked(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && x < self.width as i64 && y < self.height as i64 && self.get(x as u32, y as u32)
    }

    #[inline]
    pub fn set(&mut self, x: u32, y: u32, v: bool) {
        let w = self.width as usize;
        self.data[y as usize * w + x as usize] = v;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.data.iter().any(|&v| v)
    }

    /// Foreground pixels in scan order.
    pub fn iter_set(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width as usize;
        self.data.iter().enumerate().filter(|(_, &v)| v).map(move |(i, _)| ((i % w) as u32, (i / w) as u32))
    }
}

/// Inclusive pixel bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PixelRect {
    pub x_min: u32,
    pub y_min: u32,
    pub x_max: u32,
    pub y_max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Pixels in discovery order; the first one is the component's first pixel in scan order.
    pub pixels: Vec<(u32, u32)>,
    pub bbox: PixelRect,
}

impl Component {
    pub fn area(&self) -> usize {
        self.pixels.len()
    }
}

/// 8-connected components of the foreground, ordered by their first pixel in scan order.
pub fn connected_components(mask: &Mask) -> Vec<Component> {
    let (w, h) = (mask.width as i64, mask.height as i64);
    let mut seen = vec![false; mask.data.len()];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..mask.data.len() {
        if !mask.data[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let (sx, sy) = ((start as i64 % w) as u32, (start as i64 / w) as u32);
        let mut bbox = PixelRect { x_min: sx, y_min: sy, x_max: sx, y_max: sy };
        let mut pixels = Vec::new();
        while let Some(i) = stack.pop() {
            let (x, y) = (i as i64 % w, i as i64 / w);
            pixels.push((x as u32, y as u32));
            bbox.x_min = bbox.x_min.min(x as u32);
            bbox.x_max = bbox.x_max.max(x as u32);
            bbox.y_min = bbox.y_min.min(y as u32);
            bbox.y_max = bbox.y_max.max(y as u32);
            for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let j = (ny * w + nx) as usize;
                    if mask.data[j] && !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        out.push(Component { pixels, bbox });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphOp {
    Dilate,
    Erode,
    Open,
    Close,
}

/// Morphology with a `(2 * radius + 1)^2` square element.
///
/// Windows are clipped at the border, so dilation and erosion form an
/// adjunction on the finite grid and opening/closing are idempotent.
pub fn morphology(mask: &Mask, op: MorphOp, radius: u32) -> Mask {
    match op {
        MorphOp::Dilate => window_op(mask, radius, true),
        MorphOp::Erode => window_op(mask, radius, false),
        MorphOp::Open => window_op(&window_op(mask, radius, false), radius, true),
        MorphOp::Close => window_op(&window_op(mask, radius, true), radius, false),
    }
}

/// Separable running max (`dilate`) or min over a clipped square window.
fn window_op(mask: &Mask, radius: u32, dilate: bool) -> Mask {
    if radius == 0 {
        return mask.clone();
    }
    let (w, h) = (mask.width as usize, mask.height as usize);
    let r = radius as usize;
    let pass = |src: &[bool], len: usize, stride: usize, lines: usize, line_stride: usize| {
        let mut dst = vec![false; src.len()];
        for l in 0..lines {
            let base = l * line_stride;
            // prefix counts of foreground along the line
            let mut prefix = vec![0usize; len + 1];
            for i in 0..len {
                prefix[i + 1] = prefix[i] + src[base + i * stride] as usize;
            }
            for i in 0..len {
                let lo = i.saturating_sub(r);
                let hi = (i + r).min(len - 1);
                let ones = prefix[hi + 1] - prefix[lo];
                dst[base + i * stride] = if dilate { ones > 0 } else { ones == hi - lo + 1 };
            }
        }
        dst
    };
    let rows = pass(&mask.data, w, 1, h, w);
    let data = pass(&rows, h, w, w, 1);
    Mask { width: mask.width, height: mask.height, data }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn mask_from(rows: &[&str]) -> Mask {
        Mask::from_fn(rows[0].len() as u32, rows.len() as u32, |x, y| rows[y as usize].as_bytes()[x as usize] == b'#')
    }

    #[test]
    fn empty_mask_has_no_components() {
        assert!(connected_components(&Mask::new(5, 5)).is_empty());
    }

    #[test]
    fn two_blocks() {
        let m = mask_from(&["###...", "###...", "###...", "......", "...###", "...###", "...###"]);
        let cc = connected_components(&m);
        assert_eq!(cc.len(), 2);
        assert!(cc.iter().all(|c| c.area() == 9));
        assert_eq!(cc[1].bbox, PixelRect { x_min: 3, y_min: 4, x_max: 5, y_max: 6 });
    }

    #[test]
    fn diagonal_touch_is_connected() {
        let m = mask_from(&["#...", "##..", "..#.", "...#"]);
        let cc = connected_components(&m);
        assert_eq!(cc.len(), 1);
        assert_eq!(cc[0].area(), 5);
    }

    #[test]
    fn open_removes_isolated_pixels() {
        let m = mask_from(&[".......", ".#.....", "...###.", "...###.", "...###."]);
        let opened = morphology(&m, MorphOp::Open, 1);
        assert!(!opened.get(1, 1));
        assert_eq!(opened.count(), 9);
    }

    #[test]
    fn dilate_empty_stays_empty() {
        assert!(morphology(&Mask::new(8, 8), MorphOp::Dilate, 2).is_empty());
    }

    #[test]
    fn close_bridges_one_pixel_gaps() {
        let m = mask_from(&["..........", "##.##.##.#", ".........."]);
        assert_eq!(connected_components(&m).len(), 4);
        let closed = morphology(&m, MorphOp::Close, 1);
        assert_eq!(connected_components(&closed).len(), 1);
    }

    fn arb_mask() -> impl Strategy<Value = Mask> {
        (3u32..20, 3u32..20).prop_flat_map(|(w, h)| {
            proptest::collection::vec(proptest::bool::weighted(0.4), (w * h) as usize)
                .prop_map(move |data| Mask { width: w, height: h, data })
        })
    }

    proptest! {
        #[test]
        fn open_close_idempotent(m in arb_mask(), radius in 1u32..3) {
            let o = morphology(&m, MorphOp::Open, radius);
            prop_assert_eq!(morphology(&o, MorphOp::Open, radius), o);
            let c = morphology(&m, MorphOp::Close, radius);
            prop_assert_eq!(morphology(&c, MorphOp::Close, radius), c);
        }

        #[test]
        fn components_partition_foreground(m in arb_mask()) {
            let cc = connected_components(&m);
            let mut seen = HashSet::new();
            for c in &cc {
                for p in &c.pixels {
                    prop_assert!(seen.insert(*p), "pixel {:?} in two components", p);
                    prop_assert!(m.get(p.0, p.1));
                }
            }
            prop_assert_eq!(seen.len(), m.count());
        }
    }
}
