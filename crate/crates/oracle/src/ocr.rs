//! Simulated text detection and recognition.

use charter_synth::GroundTruth;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::numeric::is_superscript_of;
use crate::{stream, NoiseConfig, OracleError, Result};

pub const OCR_SCHEMA_VERSION: u32 = 1;
const OCR_TAG: u64 = 0x0C12_0000_7E47_0002;
const ALNUM: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";

/// A recognized text run. The string is already de-rotated; `polygon` is the
/// rotated quadrilateral in reading order (top-left, top-right,
/// bottom-right, bottom-left of the text frame).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OcrToken {
    pub polygon: [[f64; 2]; 4],
    /// Degrees counter-clockwise, in `(-90, 90]`.
    pub angle: f64,
    pub text: String,
    /// Small box raised against a token to its left.
    pub is_superscript_candidate: bool,
}

impl OcrToken {
    /// Axis-aligned token from a box `[x_min, y_min, x_max, y_max]`.
    pub fn axis_aligned(text: &str, b: [f64; 4]) -> Self {
        Self {
            polygon: [[b[0], b[1]], [b[2], b[1]], [b[2], b[3]], [b[0], b[3]]],
            angle: 0.0,
            text: text.to_string(),
            is_superscript_candidate: false,
        }
    }

    pub fn bbox(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for p in &self.polygon {
            b = [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])];
        }
        b
    }

    pub fn center(&self) -> [f64; 2] {
        let (sx, sy) = self.polygon.iter().fold((0.0, 0.0), |(x, y), p| (x + p[0], y + p[1]));
        [sx / 4.0, sy / 4.0]
    }

    /// Glyph height, measured across the reading direction.
    pub fn text_height(&self) -> f64 {
        let [a, _, _, d] = self.polygon;
        (d[0] - a[0]).hypot(d[1] - a[1])
    }

    pub fn text_width(&self) -> f64 {
        let [a, b, _, _] = self.polygon;
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    pub fn is_horizontal(&self) -> bool {
        self.angle.abs() < 1.0
    }

    fn is_degenerate(&self) -> bool {
        !(self.text_height() > 0.0 && self.text_width() > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OcrOutput {
    pub schema_version: u32,
    pub tokens: Vec<OcrToken>,
}

impl OcrOutput {
    pub fn new(mut tokens: Vec<OcrToken>) -> Self {
        mark_superscripts(&mut tokens);
        Self { schema_version: OCR_SCHEMA_VERSION, tokens }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let out: Self = serde_json::from_str(s)?;
        if out.schema_version != OCR_SCHEMA_VERSION {
            return Err(OracleError::Malformed(format!("unsupported schema_version {}", out.schema_version)));
        }
        if let Some(t) = out.tokens.iter().find(|t| t.is_degenerate() || !(t.angle > -90.0 && t.angle <= 90.0)) {
            return Err(OracleError::Malformed(format!("bad token {:?}", t.text)));
        }
        Ok(out)
    }
}

/// Maps an angle into `(-90, 90]`.
pub fn normalize_angle(mut a: f64) -> f64 {
    a = a.rem_euclid(180.0);
    if a > 90.0 {
        a - 180.0
    } else {
        a
    }
}

/// Sets `is_superscript_candidate` from box geometry alone.
pub fn mark_superscripts(tokens: &mut [OcrToken]) {
    let flags: Vec<bool> = (0..tokens.len())
        .map(|i| tokens.iter().enumerate().any(|(j, m)| j != i && is_superscript_of(m, &tokens[i])))
        .collect();
    for (t, f) in tokens.iter_mut().zip(flags) {
        t.is_superscript_candidate = f;
    }
}

/// Replaces each non-space character with probability `rate` by a different
/// alphanumeric. Returns the new string and the substitution count.
pub fn corrupt(text: &str, rate: f64, rng: &mut impl Rng) -> (String, usize) {
    if rate == 0.0 {
        return (text.to_string(), 0);
    }
    let mut n = 0;
    let out = text
        .chars()
        .map(|c| {
            if c == ' ' || !rng.gen_bool(rate) {
                return c;
            }
            n += 1;
            loop {
                let r = ALNUM[rng.gen_range(0..ALNUM.len())] as char;
                if r != c {
                    return r;
                }
            }
        })
        .collect();
    (out, n)
}

/// One token per ground-truth text box; exponent tick labels yield a
/// mantissa token and a separate raised exponent token.
pub fn simulate_ocr(gt: &GroundTruth, noise: &NoiseConfig, seed: u64) -> Result<OcrOutput> {
    noise.validate()?;
    let mut rng = stream(seed, OCR_TAG);
    let mut tokens = Vec::with_capacity(gt.texts.len());
    for t in &gt.texts {
        let parts = std::iter::once((&t.text, t.polygon, t.angle))
            .chain(t.superscript.as_ref().zip(t.superscript_polygon).map(|(s, p)| (s, p, 0.0)));
        for (text, polygon, angle) in parts {
            if noise.ocr_drop > 0.0 && rng.gen_bool(noise.ocr_drop) {
                continue;
            }
            let (text, _) = corrupt(text, noise.ocr_substitution, &mut rng);
            tokens.push(OcrToken { polygon, angle: normalize_angle(angle), text, is_superscript_candidate: false });
        }
    }
    Ok(OcrOutput::new(tokens))
}
