//! Procedural textures pasted over backgrounds, bars and pie slices.

use charter_core::Color;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TextureKind {
    Stripes { period: u32 },
    Checker { cell: u32 },
    Noise { seed: u64, density: f64 },
}

/// Texture pasted on the "on" pixels of the pattern by lightening the base
/// colour towards white.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Texture {
    pub pattern: TextureKind,
    pub strength: f64,
}

impl Texture {
    pub fn is_on(&self, x: i64, y: i64) -> bool {
        match self.pattern {
            TextureKind::Stripes { period } => {
                let p = period.max(2) as i64;
                (x + y).rem_euclid(p) < p / 2
            }
            TextureKind::Checker { cell } => {
                let c = cell.max(1) as i64;
                (x.div_euclid(c) + y.div_euclid(c)) % 2 == 0
            }
            TextureKind::Noise { seed, density } => {
                let h = crate::splitmix64(seed ^ ((x as u64) << 32) ^ (y as u64 & 0xffff_ffff));
                (h >> 11) as f64 / (1u64 << 53) as f64 <= density
            }
        }
    }

    pub fn shade(&self, base: Color, x: i64, y: i64) -> Color {
        if self.is_on(x, y) {
            base.mix(&Color::WHITE, self.strength)
        } else {
            base
        }
    }
}
