//! Sector boxes versus heatmaps on the same oracle outputs.

use std::fmt::Write;

use charter_analysis::{analyze_with, AnalysisConfig, PieMethod};
use charter_core::{ChartTable, ChartType};
use charter_oracle::{simulate_detector, simulate_ocr, NoiseConfig};
use charter_synth::GeneratedChart;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::percent;
use crate::{evaluate, Condition, EvalError, EvalItem, EvalReport, LabelMode, Pairing, ABLATION_TAUS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AblationReport {
    pub schema_version: u32,
    pub charts: usize,
    pub epsilons: Vec<f64>,
    pub taus: Vec<f64>,
    pub boxes: EvalReport,
    pub heatmaps: EvalReport,
}

fn tau_conditions() -> Vec<Condition> {
    ABLATION_TAUS
        .iter()
        .map(|&t| Condition { label_mode: LabelMode::RLevThreshold(t), pairing: Pairing::Label })
        .collect()
}

/// Extracts every pie twice from one oracle simulation per chart (seeded by
/// the chart's seed), once from sector boxes and once from heatmaps, and
/// scores both at each ε for τ in 1.0, 0.8, 0.4 and 0.0.
pub fn ablation_report(
    charts: &[GeneratedChart],
    noise: &NoiseConfig,
    epsilons: &[f64],
    config: &AnalysisConfig,
) -> Result<AblationReport, EvalError> {
    if charts.is_empty() {
        return Err(EvalError::EmptyDataset);
    }
    if let Some(c) = charts.iter().find(|c| c.truth.chart_type != ChartType::Pie) {
        return Err(EvalError::TypeMismatch { gt: c.truth.chart_type, pred: ChartType::Pie });
    }
    type Pair = (Option<ChartTable>, Option<ChartTable>);
    let preds: Vec<Pair> = charts
        .par_iter()
        .map(|c| -> Result<Pair, EvalError> {
            let seed = c.spec.seed;
            let det = simulate_detector(&c.truth, noise, seed)?;
            let ocr = simulate_ocr(&c.truth, noise, seed)?;
            let run = |m| analyze_with(&det, &ocr.tokens, &c.raster, config, m).ok();
            Ok((run(PieMethod::Boxes), run(PieMethod::Heatmaps)))
        })
        .collect::<Result<_, _>>()?;
    let ids: Vec<String> = charts.iter().map(|c| format!("pie-{:06}", c.spec.seed)).collect();
    let report = |pick: fn(&Pair) -> Option<&ChartTable>| {
        let items: Vec<EvalItem> = charts
            .iter()
            .zip(&preds)
            .zip(&ids)
            .map(|((c, p), id)| EvalItem { id, gt: &c.truth.table, pred: pick(p) })
            .collect();
        evaluate(ChartType::Pie, &items, epsilons, &tau_conditions())
    };
    Ok(AblationReport {
        schema_version: crate::REPORT_SCHEMA_VERSION,
        charts: charts.len(),
        epsilons: epsilons.to_vec(),
        taus: ABLATION_TAUS.to_vec(),
        boxes: report(|p| p.0.as_ref())?,
        heatmaps: report(|p| p.1.as_ref())?,
    })
}

impl AblationReport {
    /// `(boxes, heatmaps)` accuracy at `tau` and `epsilon`.
    pub fn pair(&self, tau: f64, epsilon: f64) -> Option<(f64, f64)> {
        let c = Condition { label_mode: LabelMode::RLevThreshold(tau), pairing: Pairing::Label };
        Some((self.boxes.accuracy(&c, epsilon)?, self.heatmaps.accuracy(&c, epsilon)?))
    }

    fn measure(tau: f64) -> String {
        let note = if tau == 1.0 {
            " (exact labels)"
        } else if tau == 0.0 {
            " (any labels)"
        } else {
            ""
        };
        format!("Sectors with R_Lev >= {tau:.1}{note}")
    }

    pub fn to_json(&self) -> Result<String, EvalError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Rows τ; a boxes and a heatmaps column per ε.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("measure");
        for e in &self.epsilons {
            let _ = write!(out, ",boxes eps={e},heatmaps eps={e}");
        }
        out.push('\n');
        for &t in &self.taus {
            let _ = write!(out, "\"{}\"", Self::measure(t));
            for &e in &self.epsilons {
                let (b, h) = self.pair(t, e).unwrap_or((f64::NAN, f64::NAN));
                let _ = write!(out, ",{b:.6},{h:.6}");
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| Measure |");
        for e in &self.epsilons {
            let _ = write!(out, " Using sector box proposals (ε={e}) | Using heatmaps (ε={e}) |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|---:|".repeat(self.epsilons.len()));
        out.push('\n');
        for &t in &self.taus {
            let _ = write!(out, "| {} |", Self::measure(t));
            for &e in &self.epsilons {
                let (b, h) = self.pair(t, e).unwrap_or((f64::NAN, f64::NAN));
                let _ = write!(out, " {} | {} |", percent(b), percent(h));
            }
            out.push('\n');
        }
        out
    }
}
