//! 8-bit RGB image buffer with PNG I/O.

use std::io::Cursor;
use std::path::Path;

use image::{ImageFormat, RgbImage};

use crate::{Color, Error, Result};

/// Row-major RGB image. Width and height are at least 1.
#[derive(Clone, PartialEq, Eq)]
pub struct Raster {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for Raster {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Raster").field("width", &self.width).field("height", &self.height).finish()
    }
}

impl Raster {
    pub fn new(width: u32, height: u32, fill: Color) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let n = width as usize * height as usize;
        let mut pixels = Vec::with_capacity(n * 3);
        for _ in 0..n {
            pixels.extend_from_slice(&fill.to_array());
        }
        Ok(Self { width, height, pixels })
    }

    pub fn from_rgb(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let expected = width as usize * height as usize * 3;
        if pixels.len() != expected {
            return Err(Error::BufferLength { expected, actual: pixels.len() });
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    fn offset(&self, x: u32, y: u32) -> usize {
        (y as usize * self.width as usize + x as usize) * 3
    }

    /// Panics when out of bounds.
    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Color {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        let o = self.offset(x, y);
        Color::new(self.pixels[o], self.pixels[o + 1], self.pixels[o + 2])
    }

    #[inline]
    pub fn get_checked(&self, x: i64, y: i64) -> Option<Color> {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return None;
        }
        Some(self.get(x as u32, y as u32))
    }

    #[inline]
    pub fn put(&mut self, x: u32, y: u32, c: Color) {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        let o = self.offset(x, y);
        self.pixels[o..o + 3].copy_from_slice(&c.to_array());
    }

    /// Writes the pixel if it lies inside the image; returns whether it did.
    #[inline]
    pub fn put_checked(&mut self, x: i64, y: i64, c: Color) -> bool {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return false;
        }
        self.put(x as u32, y as u32, c);
        true
    }

    /// Most frequent colour, ties broken towards the smaller colour value.
    pub fn mode_color(&self) -> Color {
        let mut counts = std::collections::HashMap::new();
        for px in self.pixels.chunks_exact(3) {
            *counts.entry(Color::new(px[0], px[1], px[2])).or_insert(0usize) += 1;
        }
        counts
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(c, _)| c)
            .unwrap_or(Color::WHITE)
    }

    fn to_image(&self) -> RgbImage {
        RgbImage::from_raw(self.width, self.height, self.pixels.clone()).expect("buffer length checked at construction")
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let mut out = Cursor::new(Vec::new());
        self.to_image().write_to(&mut out, ImageFormat::Png)?;
        Ok(out.into_inner())
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Self> {
        let img = image::load_from_memory_with_format(bytes, ImageFormat::Png)?.to_rgb8();
        let (w, h) = img.dimensions();
        Self::from_rgb(w, h, img.into_raw())
    }

    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.encode_png()?)?;
        Ok(())
    }

    pub fn read_png(path: impl AsRef<Path>) -> Result<Self> {
        Self::decode_png(&std::fs::read(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(Raster::new(0, 4, Color::WHITE).is_err());
        assert!(matches!(
            Raster::from_rgb(2, 2, vec![0; 11]),
            Err(Error::BufferLength { expected: 12, actual: 11 })
        ));
    }

    #[test]
    fn png_round_trip() {
        let mut r = Raster::new(7, 5, Color::new(9, 8, 7)).unwrap();
        r.put(3, 2, Color::new(200, 10, 30));
        assert!(!r.put_checked(-1, 0, Color::BLACK));
        let back = Raster::decode_png(&r.encode_png().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.get(3, 2), Color::new(200, 10, 30));
        assert_eq!(back.mode_color(), Color::new(9, 8, 7));
    }
}
