//! Batch evaluation reports and their JSON, CSV and markdown forms.

use std::fmt::Write;

use charter_core::{ChartTable, ChartType};
use serde::{Deserialize, Serialize};

use crate::{value_accuracy, EvalError, LabelMode, MatchPolicy, Pairing, ValueKind};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// ε values reported by default.
pub const DEFAULT_EPSILONS: [f64; 5] = [0.01, 0.02, 0.05, 0.1, 0.25];

/// Label thresholds of the ablation rows.
pub const ABLATION_TAUS: [f64; 4] = [1.0, 0.8, 0.4, 0.0];

/// Label mode and pairing of one report row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub label_mode: LabelMode,
    pub pairing: Pairing,
}

impl Condition {
    pub fn name(&self) -> String {
        let pairing = match self.pairing {
            Pairing::Label => "label",
            Pairing::Positional => "positional",
        };
        format!("{} ({pairing} pairing)", self.label_mode.name())
    }

    /// Any-label rows under both pairings, then one exact-label row per τ.
    pub fn defaults(taus: &[f64]) -> Vec<Condition> {
        let mut out = vec![
            Condition { label_mode: LabelMode::Any, pairing: Pairing::Label },
            Condition { label_mode: LabelMode::Any, pairing: Pairing::Positional },
        ];
        out.extend(taus.iter().map(|&t| Condition { label_mode: LabelMode::RLevThreshold(t), pairing: Pairing::Label }));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalCell {
    pub epsilon: f64,
    pub accuracy: f64,
    pub gt: usize,
    pub matched: usize,
    pub value_tp: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRow {
    pub condition: Condition,
    pub cells: Vec<EvalCell>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailedChart {
    pub id: String,
    pub reason: String,
}

/// Wall-clock figures for a batch. Never serialized, so reports of equal
/// runs stay byte-identical.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RuntimeStats {
    pub charts: usize,
    pub total_seconds: f64,
}

impl RuntimeStats {
    pub fn per_chart_ms(&self) -> f64 {
        if self.charts == 0 {
            0.0
        } else {
            1000.0 * self.total_seconds / self.charts as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: u32,
    pub chart_type: ChartType,
    pub value_kind: ValueKind,
    pub charts: usize,
    pub epsilons: Vec<f64>,
    pub rows: Vec<EvalRow>,
    /// Charts without a usable prediction; they still count their GT.
    pub failures: Vec<FailedChart>,
    #[serde(skip)]
    pub runtime: Option<RuntimeStats>,
}

/// One chart to score: GT and, unless extraction failed, the prediction.
#[derive(Debug, Clone, Copy)]
pub struct EvalItem<'a> {
    pub id: &'a str,
    pub gt: &'a ChartTable,
    pub pred: Option<&'a ChartTable>,
}

/// Scores a batch of charts of one type. Counts are summed over charts in
/// input order, so the report does not depend on how the predictions were
/// produced.
pub fn evaluate(
    chart_type: ChartType,
    items: &[EvalItem<'_>],
    epsilons: &[f64],
    conditions: &[Condition],
) -> Result<EvalReport, EvalError> {
    if epsilons.is_empty() {
        return Err(EvalError::InvalidPolicy("no epsilon values".into()));
    }
    let value_kind = ValueKind::for_chart(chart_type);
    let mut failures = Vec::new();
    let mut rows: Vec<EvalRow> = conditions
        .iter()
        .map(|&condition| EvalRow {
            condition,
            cells: epsilons.iter().map(|&epsilon| EvalCell { epsilon, accuracy: 0.0, gt: 0, matched: 0, value_tp: 0 }).collect(),
        })
        .collect();
    for item in items {
        if item.gt.chart_type != chart_type {
            return Err(EvalError::TypeMismatch { gt: item.gt.chart_type, pred: chart_type });
        }
        let gt_count = item.gt.element_count();
        let pred = match item.pred {
            Some(p) if p.chart_type == chart_type => Some(p),
            Some(p) => {
                failures.push(FailedChart { id: item.id.into(), reason: format!("predicted {}", p.chart_type) });
                None
            }
            None => {
                failures.push(FailedChart { id: item.id.into(), reason: "no prediction".into() });
                None
            }
        };
        for row in &mut rows {
            for cell in &mut row.cells {
                cell.gt += gt_count;
                if let Some(p) = pred {
                    let policy = MatchPolicy::new(row.condition.label_mode, cell.epsilon, value_kind)?
                        .with_pairing(row.condition.pairing);
                    let a = value_accuracy(p, item.gt, &policy)?;
                    cell.matched += a.matched;
                    cell.value_tp += a.value_tp;
                }
            }
        }
    }
    for cell in rows.iter_mut().flat_map(|r| r.cells.iter_mut()) {
        cell.accuracy = if cell.gt == 0 { 1.0 } else { cell.value_tp as f64 / cell.gt as f64 };
    }
    Ok(EvalReport {
        schema_version: REPORT_SCHEMA_VERSION,
        chart_type,
        value_kind,
        charts: items.len(),
        epsilons: epsilons.to_vec(),
        rows,
        failures,
        runtime: None,
    })
}

pub(crate) fn percent(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

impl EvalReport {
    /// Accuracy of the row matching `condition` at `epsilon`.
    pub fn accuracy(&self, condition: &Condition, epsilon: f64) -> Option<f64> {
        let row = self.rows.iter().find(|r| r.condition == *condition)?;
        row.cells.iter().find(|c| c.epsilon == epsilon).map(|c| c.accuracy)
    }

    pub fn to_json(&self) -> Result<String, EvalError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn from_json(s: &str) -> Result<Self, EvalError> {
        Ok(serde_json::from_str(s)?)
    }

    /// One row per condition, one accuracy column per ε.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("chart_type,condition");
        for e in &self.epsilons {
            let _ = write!(out, ",eps={e}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{},\"{}\"", self.chart_type, row.condition.name());
            for c in &row.cells {
                let _ = write!(out, ",{:.6}", c.accuracy);
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("### {} ({} charts, {} failed)\n\n| Condition |", self.chart_type, self.charts, self.failures.len());
        for e in &self.epsilons {
            let _ = write!(out, " ε={e} |");
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(self.epsilons.len()));
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "| {} |", row.condition.name());
            for c in &row.cells {
                let _ = write!(out, " {} |", percent(c.accuracy));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use charter_core::{Provenance, TableRow};

    fn table(values: &[f64]) -> ChartTable {
        let mut t = ChartTable::new(ChartType::Vbar);
        t.rows = values
            .iter()
            .enumerate()
            .map(|(i, &v)| TableRow {
                label: format!("b{i}"),
                value: v,
                label_source: Provenance::GroundTruth,
                value_source: Provenance::GroundTruth,
                confidence: 1.0,
            })
            .collect();
        t
    }

    #[test]
    fn counts_and_failures() {
        let (g1, g2) = (table(&[10.0, 20.0]), table(&[5.0]));
        let p1 = table(&[10.3, 20.0]);
        let items = [EvalItem { id: "a", gt: &g1, pred: Some(&p1) }, EvalItem { id: "b", gt: &g2, pred: None }];
        let r = evaluate(ChartType::Vbar, &items, &[0.01, 0.05], &Condition::defaults(&[1.0])).unwrap();
        assert_eq!(r.failures, vec![FailedChart { id: "b".into(), reason: "no prediction".into() }]);
        let cells = &r.rows[2].cells;
        assert_eq!((cells[0].gt, cells[0].matched, cells[0].value_tp), (3, 2, 1));
        assert!((cells[1].accuracy - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.to_csv().lines().count(), 4);
        assert!(r.to_markdown().contains("| R_Lev>=1.0 (label pairing) | 33.3% | 66.7% |"));
        assert_eq!(EvalReport::from_json(&r.to_json().unwrap()).unwrap(), r);
    }
}
