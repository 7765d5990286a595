//! Legend reading and colour matching.

use charter_core::{connected_components, Color, Mask, Raster};
use charter_oracle::OcrToken;
use serde::{Deserialize, Serialize};

use crate::pixels::{ink_color, mode_in, mode_of};
use crate::AnalysisConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegendEntry {
    pub label: String,
    /// `None` when no uniform swatch was found left of the label.
    pub color: Option<Color>,
    pub swatch: Option<[f64; 4]>,
    /// Index of the label token.
    pub token: usize,
}

/// Entries of the legend inside `legend_box`: every token centred in the box
/// paired with the largest uniform blob in a strip to its left. Background
/// and ink pixels never count as swatch pixels.
pub fn read_legend(
    legend_box: [f64; 4],
    tokens: &[OcrToken],
    raster: &Raster,
    config: &AnalysisConfig,
) -> Vec<LegendEntry> {
    let Some((background, _)) = mode_in(raster, legend_box) else { return Vec::new() };
    let inside: Vec<usize> = (0..tokens.len())
        .filter(|&i| {
            let c = tokens[i].center();
            c[0] >= legend_box[0] && c[0] <= legend_box[2] && c[1] >= legend_box[1] && c[1] <= legend_box[3]
        })
        .collect();
    let own: Vec<OcrToken> = inside.iter().map(|&i| tokens[i].clone()).collect();
    let ink = ink_color(raster, &own, background);
    let mut entries: Vec<LegendEntry> = inside
        .into_iter()
        .map(|i| {
            let b = tokens[i].bbox();
            let h = b[3] - b[1];
            let region = [b[0] - 2.5 * h.max(12.0), b[1] - 2.0, b[0] - 1.0, b[3] + 2.0];
            let (color, swatch) = find_swatch(raster, region, background, ink, config).unzip();
            LegendEntry { label: tokens[i].text.clone(), color, swatch, token: i }
        })
        .collect();
    entries.sort_by(|a, b| {
        let (ca, cb) = (tokens[a.token].center(), tokens[b.token].center());
        ca[1].total_cmp(&cb[1]).then(ca[0].total_cmp(&cb[0]))
    });
    entries
}

fn find_swatch(
    raster: &Raster,
    region: [f64; 4],
    background: Color,
    ink: Option<Color>,
    config: &AnalysisConfig,
) -> Option<(Color, [f64; 4])> {
    let x0 = region[0].ceil().max(0.0) as u32;
    let y0 = region[1].ceil().max(0.0) as u32;
    let x1 = (region[2].floor().max(0.0) as u32).min(raster.width().saturating_sub(1));
    let y1 = (region[3].floor().max(0.0) as u32).min(raster.height().saturating_sub(1));
    if x1 < x0 || y1 < y0 {
        return None;
    }
    let mask = Mask::from_fn(x1 - x0 + 1, y1 - y0 + 1, |x, y| {
        let c = raster.get(x0 + x, y0 + y);
        c.distance(&background) > 30.0 && ink.map_or(true, |k| c.distance(&k) > 30.0)
    });
    let comp = connected_components(&mask).into_iter().filter(|c| c.area() >= 16).max_by_key(|c| c.area())?;
    let (color, share) = mode_of(comp.pixels.iter().map(|&(x, y)| raster.get(x0 + x, y0 + y)))?;
    (share >= config.uniform_fraction).then(|| {
        let r = comp.bbox;
        (color, [(x0 + r.x_min) as f64, (y0 + r.y_min) as f64, (x0 + r.x_max) as f64, (y0 + r.y_max) as f64])
    })
}

/// Index of the legend entry whose swatch colour is nearest each element
/// colour, if within `legend_color_distance`. Elements without a uniform
/// colour (`None`) stay unassigned.
pub fn match_legend(entries: &[LegendEntry], colors: &[Option<Color>], config: &AnalysisConfig) -> Vec<Option<usize>> {
    colors
        .iter()
        .map(|c| {
            let c = (*c)?;
            entries
                .iter()
                .enumerate()
                .filter_map(|(i, e)| e.color.map(|s| (i, s.distance(&c))))
                .filter(|&(_, d)| d <= config.legend_color_distance)
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(i, _)| i)
        })
        .collect()
}
