//! Turns detector output, OCR tokens and the raster of one chart into a
//! [`ChartTable`].
//!
//! [`analyze`] classifies the chart, attaches titles found inside the
//! detector's text boxes, reads the legend, and dispatches to the bar, pie,
//! line or scatter extractor. Every step is also public for testing and for
//! the overlay renderer ([`analyze_traced`]).

mod axis;
mod bars;
mod classify;
mod config;
mod legend;
mod lines;
mod pie;
mod pixels;

use charter_core::{BoxCategory, ChartTable, ChartType, Orientation, Provenance, Raster, Series, TableRow};
use charter_oracle::{DetectorOutput, OcrToken};
use serde::{Deserialize, Serialize};

pub use axis::{recover_axis, AxisModel};
pub use bars::{extract_bars, BarElement};
pub use classify::classify_chart;
pub use config::AnalysisConfig;
pub use legend::{match_legend, read_legend, LegendEntry};
pub use lines::{extract_lines, extract_scatter, SeriesElement};
pub use pie::{
    extract_sectors, fit_pies, label_sectors, pie_from_boxes, sample_sector_colors, sectors_from_bounds, PieGeometry,
    PieMethod, PieSector, SectorLabel,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error("no chart region above the score threshold")]
    NoChartRegion,
    #[error("{0} charts are not handled by this step")]
    WrongChartType(ChartType),
    #[error("no {0} elements survived filtering")]
    NoElements(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl AnalysisError {
    /// Stable identifier for failure reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NoChartRegion => "no_chart",
            Self::WrongChartType(_) => "wrong_chart_type",
            Self::NoElements(_) => "no_elements",
            Self::InvalidInput(_) => "invalid_input",
        }
    }
}

/// Everything recovered on the way to the table.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalysisTrace {
    pub chart_type: Option<ChartType>,
    pub x_axis: Option<AxisModel>,
    pub y_axis: Option<AxisModel>,
    pub legend: Vec<LegendEntry>,
    pub bars: Vec<BarElement>,
    pub pies: Vec<PieGeometry>,
    pub series: Vec<SeriesElement>,
}

pub fn analyze(det: &DetectorOutput, tokens: &[OcrToken], raster: &Raster) -> Result<ChartTable, AnalysisError> {
    analyze_with(det, tokens, raster, &AnalysisConfig::default(), PieMethod::Heatmaps)
}

pub fn analyze_with(
    det: &DetectorOutput,
    tokens: &[OcrToken],
    raster: &Raster,
    config: &AnalysisConfig,
    method: PieMethod,
) -> Result<ChartTable, AnalysisError> {
    analyze_traced(det, tokens, raster, config, method).map(|(t, _)| t)
}

fn validate(det: &DetectorOutput, tokens: &[OcrToken], raster: &Raster) -> Result<(), AnalysisError> {
    if det.raster_size != [raster.width(), raster.height()] {
        return Err(AnalysisError::InvalidInput(format!(
            "detector output is for {:?} but the raster is {}x{}",
            det.raster_size,
            raster.width(),
            raster.height()
        )));
    }
    for (cat, h) in &det.heatmaps {
        if h.width() == 0 || raster.width() % h.width() != 0 || raster.height() % h.height() != 0 {
            return Err(AnalysisError::InvalidInput(format!("{cat} heatmap size does not divide the raster")));
        }
        if h.width() * raster.height() != h.height() * raster.width() {
            return Err(AnalysisError::InvalidInput(format!("{cat} heatmap is not uniformly scaled")));
        }
    }
    if let Some(b) = det.boxes.iter().find(|b| !b.is_valid()) {
        return Err(AnalysisError::InvalidInput(format!("malformed box {b:?}")));
    }
    if tokens.iter().any(|t| t.polygon.iter().flatten().any(|v| !v.is_finite()) || !t.angle.is_finite()) {
        return Err(AnalysisError::InvalidInput("token with non-finite geometry".into()));
    }
    Ok(())
}

fn best_box(det: &DetectorOutput, cat: BoxCategory, config: &AnalysisConfig) -> Option<[f64; 4]> {
    det.boxes_of(cat)
        .filter(|b| b.score >= config.region_score_threshold)
        .max_by(|a, b| a.score.total_cmp(&b.score))
        .map(pixels::bbox_of)
}

fn centred_in(t: &OcrToken, b: [f64; 4], margin: f64) -> bool {
    let c = t.center();
    c[0] >= b[0] - margin && c[0] <= b[2] + margin && c[1] >= b[1] - margin && c[1] <= b[3] + margin
}

/// Full pipeline, also returning the intermediate geometry.
pub fn analyze_traced(
    det: &DetectorOutput,
    tokens: &[OcrToken],
    raster: &Raster,
    config: &AnalysisConfig,
    method: PieMethod,
) -> Result<(ChartTable, AnalysisTrace), AnalysisError> {
    validate(det, tokens, raster)?;
    let chart_type = classify_chart(det, config)?;
    let mut table = ChartTable::new(chart_type);
    let mut trace = AnalysisTrace { chart_type: Some(chart_type), ..Default::default() };

    let mut free = vec![true; tokens.len()];
    for (cat, slot) in [
        (BoxCategory::Title, &mut table.title),
        (BoxCategory::Caption, &mut table.caption),
        (BoxCategory::XLabel, &mut table.x_title),
        (BoxCategory::YLabel, &mut table.y_title),
    ] {
        let Some(b) = best_box(det, cat, config) else { continue };
        let mut inside: Vec<usize> = (0..tokens.len()).filter(|&i| free[i] && centred_in(&tokens[i], b, 3.0)).collect();
        inside.sort_by(|&a, &b| {
            let (ca, cb) = (tokens[a].center(), tokens[b].center());
            if tokens[a].is_horizontal() {
                ca[1].total_cmp(&cb[1]).then(ca[0].total_cmp(&cb[0]))
            } else {
                cb[1].total_cmp(&ca[1]).then(ca[0].total_cmp(&cb[0]))
            }
        });
        if !inside.is_empty() {
            for &i in &inside {
                free[i] = false;
            }
            *slot = Some(inside.iter().map(|&i| tokens[i].text.as_str()).collect::<Vec<_>>().join(" "));
        }
    }
    let legend_box = best_box(det, BoxCategory::Legend, config);
    if let Some(b) = legend_box {
        trace.legend = read_legend(b, tokens, raster, config);
        for (i, t) in tokens.iter().enumerate() {
            if centred_in(t, b, 0.0) {
                free[i] = false;
            }
        }
    }
    let candidates: Vec<usize> = (0..tokens.len()).filter(|&i| free[i]).collect();
    let free_tokens: Vec<OcrToken> = candidates.iter().map(|&i| tokens[i].clone()).collect();
    let peaks = |cat: charter_core::HeatmapCategory, orientation: Orientation| -> Vec<f64> {
        let Some(h) = det.heatmap(cat) else { return Vec::new() };
        let s = raster.width() as f64 / h.width() as f64;
        charter_core::local_maxima(h, config.peak_threshold, config.peak_min_distance)
            .into_iter()
            .map(|p| {
                let q = charter_core::refine_peak(h, p.x as u32, p.y as u32);
                match orientation {
                    Orientation::X => q.x * s,
                    Orientation::Y => q.y * s,
                }
            })
            .collect()
    };
    let axis = |o: Orientation| {
        let cat = match o {
            Orientation::X => charter_core::HeatmapCategory::XTick,
            Orientation::Y => charter_core::HeatmapCategory::YTick,
        };
        recover_axis(&free_tokens, o, &peaks(cat, o), config)
    };
    let background = raster.mode_color();
    let ink = pixels::ink_color(raster, tokens, background);

    match chart_type {
        ChartType::Vbar | ChartType::Hbar => {
            let o = if chart_type == ChartType::Vbar { Orientation::Y } else { Orientation::X };
            let value_axis = axis(o);
            let bars = extract_bars(det, chart_type, value_axis.as_ref(), tokens, &candidates, raster, &trace.legend, config)?;
            table.value_range = value_axis.as_ref().and_then(|a| a.value_range()).or_else(|| {
                let lo = bars.iter().map(|b| b.value).fold(f64::INFINITY, f64::min);
                let hi = bars.iter().map(|b| b.value).fold(f64::NEG_INFINITY, f64::max);
                Some([lo.min(0.0), hi])
            });
            table.rows = bars
                .iter()
                .map(|b| TableRow {
                    label: b.label.clone(),
                    value: b.value,
                    label_source: b.label_source,
                    value_source: b.value_source,
                    confidence: b.confidence,
                })
                .collect();
            match o {
                Orientation::X => trace.x_axis = value_axis,
                Orientation::Y => trace.y_axis = value_axis,
            }
            trace.bars = bars;
        }
        ChartType::Pie => {
            let mut pies = match method {
                PieMethod::Heatmaps => {
                    let mut pies = fit_pies(det, config);
                    for g in &mut pies {
                        g.sectors = extract_sectors(g, det, config);
                    }
                    pies
                }
                PieMethod::Boxes => {
                    let boxes: Vec<_> = det.boxes_of(BoxCategory::PieSector).cloned().collect();
                    pie_from_boxes(&boxes, config).into_iter().collect()
                }
            };
            let Some(main) = pies.first_mut() else { return Err(AnalysisError::NoElements("pie")) };
            sample_sector_colors(main, raster, config);
            let labels = label_sectors(main, raster, tokens, &candidates, &trace.legend, ink, config);
            let confidence = main.support.min(1.0);
            table.rows = main
                .sectors
                .iter()
                .zip(labels)
                .map(|(s, l)| TableRow {
                    label: l.label,
                    value: s.span() / 360.0,
                    label_source: l.source,
                    value_source: Provenance::SectorGeometry,
                    confidence,
                })
                .collect();
            table.value_range = Some([0.0, 1.0]);
            trace.pies = pies;
        }
        ChartType::Line | ChartType::Scatter => {
            let (xa, ya) = (axis(Orientation::X), axis(Orientation::Y));
            let series = if chart_type == ChartType::Line {
                extract_lines(det, raster, xa.as_ref(), ya.as_ref(), &trace.legend, ink, config)
            } else {
                extract_scatter(det, raster, xa.as_ref(), ya.as_ref(), &trace.legend, config)
            };
            if series.is_empty() {
                return Err(AnalysisError::NoElements(if chart_type == ChartType::Line { "line" } else { "scatter" }));
            }
            table.x_range = xa.as_ref().and_then(|a| a.value_range());
            table.value_range = ya.as_ref().and_then(|a| a.value_range());
            table.series = series
                .iter()
                .map(|s| Series {
                    label: s.label.clone(),
                    points: s.points.clone(),
                    label_source: s.label_source,
                    value_source: if s.calibrated { Provenance::AxisInterpolated } else { Provenance::PixelSpace },
                    confidence: 1.0,
                })
                .collect();
            trace.x_axis = xa;
            trace.y_axis = ya;
            trace.series = series;
        }
    }
    Ok((table, trace))
}
