//! Element matching and ε relative-error accuracy.

use charter_core::{ChartTable, ChartType};
use serde::{Deserialize, Serialize};

use crate::{levenshtein_ratio, EvalError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    /// Labels only steer pairing; every pair may score.
    Any,
    /// Pairs need `R_Lev >= τ`.
    RLevThreshold(f64),
}

impl LabelMode {
    fn admits(&self, r: f64) -> bool {
        match self {
            Self::Any => true,
            Self::RLevThreshold(tau) => r >= *tau,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Any => "any".into(),
            Self::RLevThreshold(t) => format!("R_Lev>={t:.1}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueKind {
    BarValue,
    SectorAngle,
    PointPair,
}

impl ValueKind {
    pub fn for_chart(t: ChartType) -> Self {
        match t {
            ChartType::Vbar | ChartType::Hbar => Self::BarValue,
            ChartType::Pie => Self::SectorAngle,
            ChartType::Line | ChartType::Scatter => Self::PointPair,
        }
    }
}

/// How GT and predicted elements are paired before values are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// Greedy by label similarity, ties broken by position.
    #[default]
    Label,
    /// By position alone; the label mode then filters the pairs.
    Positional,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchPolicy {
    pub label_mode: LabelMode,
    pub epsilon: f64,
    pub value_kind: ValueKind,
    #[serde(default)]
    pub pairing: Pairing,
}

impl MatchPolicy {
    pub fn new(label_mode: LabelMode, epsilon: f64, value_kind: ValueKind) -> Result<Self, EvalError> {
        let p = Self { label_mode, epsilon, value_kind, pairing: Pairing::Label };
        p.validate()?;
        Ok(p)
    }

    pub fn with_pairing(mut self, pairing: Pairing) -> Self {
        self.pairing = pairing;
        self
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(EvalError::InvalidPolicy(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if let LabelMode::RLevThreshold(t) = self.label_mode {
            if !(0.0..=1.0).contains(&t) {
                return Err(EvalError::InvalidPolicy(format!("tau must lie in [0, 1], got {t}")));
            }
        }
        Ok(())
    }
}

/// One GT element paired with one prediction. Indices are into the rows,
/// or into the series points flattened in series order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub gt: usize,
    pub pred: usize,
    pub r_lev: f64,
    pub value_tp: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub gt_count: usize,
    pub matched: usize,
    pub value_tp: usize,
    pub pairs: Vec<MatchedPair>,
}

impl Accuracy {
    /// `value_tp / gt_count`; a chart without GT elements scores 1.
    pub fn accuracy(&self) -> f64 {
        if self.gt_count == 0 {
            1.0
        } else {
            self.value_tp as f64 / self.gt_count as f64
        }
    }
}

/// Relative error test with the absolute fallback at a zero GT value:
/// `|pred| <= ε · range`.
pub fn within_epsilon(gt: f64, pred: f64, epsilon: f64, range: f64) -> bool {
    if gt == 0.0 {
        pred.abs() <= epsilon * range
    } else {
        ((gt - pred) / gt).abs() <= epsilon
    }
}

/// Scores `pred` against `gt` under `policy`.
///
/// Rows are paired greedily by label similarity (ties by position) or by
/// position, then each pair is a value TP if it is within ε. Pie values are
/// compared as angles. Series are paired the same way, with position being
/// the mean normalized distance between the point sets, and points within
/// paired series are matched greedily by distance; a point is a TP when both
/// coordinates are within ε of the respective axis range.
pub fn value_accuracy(pred: &ChartTable, gt: &ChartTable, policy: &MatchPolicy) -> Result<Accuracy, EvalError> {
    policy.validate()?;
    if pred.chart_type != gt.chart_type {
        return Err(EvalError::TypeMismatch { gt: gt.chart_type, pred: pred.chart_type });
    }
    match policy.value_kind {
        ValueKind::BarValue | ValueKind::SectorAngle => Ok(match_rows(pred, gt, policy)),
        ValueKind::PointPair => Ok(match_series(pred, gt, policy)),
    }
}

fn extent(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    (hi > lo).then_some(hi - lo)
}

fn range_width(r: Option<[f64; 2]>) -> Option<f64> {
    r.map(|[a, b]| (b - a).abs()).filter(|w| *w > 0.0)
}

/// Greedy assignment over candidate pairs already in preference order.
fn greedy(cands: impl IntoIterator<Item = (usize, usize)>, n: usize, m: usize) -> Vec<(usize, usize)> {
    let (mut gt_used, mut pred_used) = (vec![false; n], vec![false; m]);
    let mut out = Vec::new();
    for (i, j) in cands {
        if !gt_used[i] && !pred_used[j] {
            gt_used[i] = true;
            pred_used[j] = true;
            out.push((i, j));
        }
    }
    out
}

/// Rotation of the predicted sector order that best lines up with GT.
fn sector_offset(gt: &[f64], pred: &[f64]) -> usize {
    let m = pred.len();
    let n = gt.len().min(m);
    (0..m.max(1))
        .map(|k| (k, (0..n).map(|i| (gt[i] - pred[(i + k) % m]).abs()).sum::<f64>()))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map_or(0, |(k, _)| k)
}

fn match_rows(pred: &ChartTable, gt: &ChartTable, policy: &MatchPolicy) -> Accuracy {
    let sector = policy.value_kind == ValueKind::SectorAngle;
    let scale = if sector { 360.0 } else { 1.0 };
    let gv: Vec<f64> = gt.rows.iter().map(|r| r.value * scale).collect();
    let pv: Vec<f64> = pred.rows.iter().map(|r| r.value * scale).collect();
    let (n, m) = (gv.len(), pv.len());
    let range = if sector {
        360.0
    } else {
        range_width(gt.value_range).or_else(|| extent(gv.iter().copied().chain([0.0]))).unwrap_or(1.0)
    };
    let offset = if sector { sector_offset(&gv, &pv) } else { 0 };
    let pos = |j: usize| (j + m - offset) % m.max(1);
    let r = |i: usize, j: usize| levenshtein_ratio(&gt.rows[i].label, &pred.rows[j].label);

    let pairs: Vec<(usize, usize, f64)> = match policy.pairing {
        Pairing::Label => {
            let mut cands: Vec<(usize, usize, f64)> = Vec::with_capacity(n * m);
            for i in 0..n {
                for j in 0..m {
                    let rl = r(i, j);
                    if policy.label_mode.admits(rl) {
                        cands.push((i, j, rl));
                    }
                }
            }
            cands.sort_by(|a, b| {
                b.2.total_cmp(&a.2)
                    .then(pos(a.1).abs_diff(a.0).cmp(&pos(b.1).abs_diff(b.0)))
                    .then(a.0.cmp(&b.0))
                    .then(a.1.cmp(&b.1))
            });
            let chosen = greedy(cands.iter().map(|c| (c.0, c.1)), n, m);
            chosen.into_iter().map(|(i, j)| (i, j, r(i, j))).collect()
        }
        Pairing::Positional => (0..n.min(m))
            .map(|i| {
                let j = (i + offset) % m;
                (i, j, r(i, j))
            })
            .filter(|&(_, _, rl)| policy.label_mode.admits(rl))
            .collect(),
    };
    let mut pairs: Vec<MatchedPair> = pairs
        .into_iter()
        .map(|(i, j, r_lev)| MatchedPair {
            gt: i,
            pred: j,
            r_lev,
            value_tp: within_epsilon(gv[i], pv[j], policy.epsilon, range),
        })
        .collect();
    pairs.sort_by_key(|p| p.gt);
    Accuracy {
        gt_count: n,
        matched: pairs.len(),
        value_tp: pairs.iter().filter(|p| p.value_tp).count(),
        pairs,
    }
}

fn match_series(pred: &ChartTable, gt: &ChartTable, policy: &MatchPolicy) -> Accuracy {
    let all_gt = || gt.series.iter().flat_map(|s| s.points.iter());
    let xr = range_width(gt.x_range).or_else(|| extent(all_gt().map(|p| p[0]))).unwrap_or(1.0);
    let yr = range_width(gt.value_range).or_else(|| extent(all_gt().map(|p| p[1]))).unwrap_or(1.0);
    let d = |a: &[f64; 2], b: &[f64; 2]| ((a[0] - b[0]) / xr).abs().max(((a[1] - b[1]) / yr).abs());
    let (n, m) = (gt.series.len(), pred.series.len());

    // Mean distance from each GT point to the nearest predicted point.
    let closeness = |i: usize, j: usize| -> f64 {
        let (g, p) = (&gt.series[i].points, &pred.series[j].points);
        if g.is_empty() || p.is_empty() {
            return f64::INFINITY;
        }
        g.iter().map(|a| p.iter().map(|b| d(a, b)).fold(f64::INFINITY, f64::min)).sum::<f64>() / g.len() as f64
    };
    let mut cands: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let rl = levenshtein_ratio(&gt.series[i].label, &pred.series[j].label);
            if policy.pairing == Pairing::Positional || policy.label_mode.admits(rl) {
                cands.push((i, j, rl, closeness(i, j)));
            }
        }
    }
    match policy.pairing {
        Pairing::Label => cands.sort_by(|a, b| {
            b.2.total_cmp(&a.2).then(a.3.total_cmp(&b.3)).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1))
        }),
        Pairing::Positional => cands.sort_by(|a, b| a.3.total_cmp(&b.3).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1))),
    }
    let r_of = |i: usize, j: usize| cands.iter().find(|c| c.0 == i && c.1 == j).map_or(0.0, |c| c.2);
    let series_pairs: Vec<(usize, usize)> = greedy(cands.iter().map(|c| (c.0, c.1)), n, m)
        .into_iter()
        .filter(|&(i, j)| policy.label_mode.admits(r_of(i, j)))
        .collect();

    let gt_base: Vec<usize> = gt.series.iter().scan(0, |acc, s| Some(std::mem::replace(acc, *acc + s.points.len()))).collect();
    let pred_base: Vec<usize> =
        pred.series.iter().scan(0, |acc, s| Some(std::mem::replace(acc, *acc + s.points.len()))).collect();
    let mut pairs = Vec::new();
    for (i, j) in series_pairs {
        let (g, p) = (&gt.series[i].points, &pred.series[j].points);
        let r_lev = r_of(i, j);
        let mut pc: Vec<(usize, usize, f64)> =
            (0..g.len()).flat_map(|a| (0..p.len()).map(move |b| (a, b))).map(|(a, b)| (a, b, d(&g[a], &p[b]))).collect();
        pc.sort_by(|x, y| x.2.total_cmp(&y.2).then(x.0.cmp(&y.0)).then(x.1.cmp(&y.1)));
        for (a, b) in greedy(pc.iter().map(|c| (c.0, c.1)), g.len(), p.len()) {
            let tp = (g[a][0] - p[b][0]).abs() <= policy.epsilon * xr && (g[a][1] - p[b][1]).abs() <= policy.epsilon * yr;
            pairs.push(MatchedPair { gt: gt_base[i] + a, pred: pred_base[j] + b, r_lev, value_tp: tp });
        }
    }
    pairs.sort_by_key(|p| p.gt);
    Accuracy {
        gt_count: gt.element_count(),
        matched: pairs.len(),
        value_tp: pairs.iter().filter(|p| p.value_tp).count(),
        pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use charter_core::{Provenance, Series, TableRow};

    fn bars(rows: &[(&str, f64)]) -> ChartTable {
        let mut t = ChartTable::new(ChartType::Vbar);
        t.value_range = Some([0.0, 200.0]);
        t.rows = rows
            .iter()
            .map(|(l, v)| TableRow {
                label: l.to_string(),
                value: *v,
                label_source: Provenance::GroundTruth,
                value_source: Provenance::GroundTruth,
                confidence: 1.0,
            })
            .collect();
        t
    }

    fn policy(mode: LabelMode, eps: f64) -> MatchPolicy {
        MatchPolicy::new(mode, eps, ValueKind::BarValue).unwrap()
    }

    #[test]
    fn epsilon_bounds() {
        let (gt, pred) = (bars(&[("a", 100.0)]), bars(&[("a", 104.0)]));
        assert_eq!(value_accuracy(&pred, &gt, &policy(LabelMode::Any, 0.05)).unwrap().value_tp, 1);
        assert_eq!(value_accuracy(&pred, &gt, &policy(LabelMode::Any, 0.01)).unwrap().value_tp, 0);
        assert_eq!(value_accuracy(&gt, &gt, &policy(LabelMode::RLevThreshold(1.0), 1e-9)).unwrap().accuracy(), 1.0);
    }

    #[test]
    fn exact_labels_only() {
        let gt = bars(&[("cats", 10.0), ("dogs", 20.0)]);
        let pred = bars(&[("cat", 10.0), ("dogs", 20.0)]);
        let a = value_accuracy(&pred, &gt, &policy(LabelMode::RLevThreshold(1.0), 0.01)).unwrap();
        assert_eq!((a.matched, a.value_tp, a.gt_count), (1, 1, 2));
        assert_eq!(a.pairs[0].gt, 1);
        let any = value_accuracy(&pred, &gt, &policy(LabelMode::Any, 0.01)).unwrap();
        assert_eq!(any.value_tp, 2);
    }

    #[test]
    fn zero_guard_uses_axis_range() {
        let gt = bars(&[("a", 0.0)]);
        assert_eq!(value_accuracy(&bars(&[("a", 1.9)]), &gt, &policy(LabelMode::Any, 0.01)).unwrap().value_tp, 1);
        assert_eq!(value_accuracy(&bars(&[("a", 2.1)]), &gt, &policy(LabelMode::Any, 0.01)).unwrap().value_tp, 0);
    }

    #[test]
    fn positional_pairing_ignores_labels_for_order() {
        let gt = bars(&[("a", 10.0), ("b", 20.0)]);
        let pred = bars(&[("b", 10.0), ("a", 20.0)]);
        let by_label = value_accuracy(&pred, &gt, &policy(LabelMode::Any, 0.01)).unwrap();
        assert_eq!(by_label.value_tp, 0);
        let by_pos = value_accuracy(&pred, &gt, &policy(LabelMode::Any, 0.01).with_pairing(Pairing::Positional)).unwrap();
        assert_eq!(by_pos.value_tp, 2);
    }

    #[test]
    fn rotated_sectors_pair_positionally() {
        let mut gt = bars(&[("x", 0.5), ("y", 0.3), ("z", 0.2)]);
        gt.chart_type = ChartType::Pie;
        let mut pred = bars(&[("p", 0.2), ("q", 0.5), ("r", 0.3)]);
        pred.chart_type = ChartType::Pie;
        let p = MatchPolicy::new(LabelMode::Any, 0.01, ValueKind::SectorAngle).unwrap().with_pairing(Pairing::Positional);
        assert_eq!(value_accuracy(&pred, &gt, &p).unwrap().value_tp, 3);
    }

    #[test]
    fn series_points() {
        let mk = |label: &str, pts: Vec<[f64; 2]>| Series {
            label: label.into(),
            points: pts,
            label_source: Provenance::GroundTruth,
            value_source: Provenance::GroundTruth,
            confidence: 1.0,
        };
        let mut gt = ChartTable::new(ChartType::Line);
        gt.x_range = Some([0.0, 100.0]);
        gt.value_range = Some([0.0, 10.0]);
        gt.series = vec![mk("up", vec![[0.0, 0.0], [50.0, 5.0]]), mk("flat", vec![[0.0, 8.0], [50.0, 8.0]])];
        let mut pred = gt.clone();
        pred.series = vec![mk("series_1", vec![[0.5, 8.05], [50.0, 7.0]]), mk("series_2", vec![[0.0, 0.0], [50.9, 5.0]])];
        let p = MatchPolicy::new(LabelMode::Any, 0.01, ValueKind::PointPair).unwrap().with_pairing(Pairing::Positional);
        let a = value_accuracy(&pred, &gt, &p).unwrap();
        assert_eq!((a.gt_count, a.matched, a.value_tp), (4, 4, 3));
        let strict = MatchPolicy::new(LabelMode::RLevThreshold(1.0), 0.01, ValueKind::PointPair).unwrap();
        assert_eq!(value_accuracy(&pred, &gt, &strict).unwrap().matched, 0);
    }

    #[test]
    fn invalid_policies() {
        assert!(MatchPolicy::new(LabelMode::Any, 0.0, ValueKind::BarValue).is_err());
        assert!(MatchPolicy::new(LabelMode::RLevThreshold(1.5), 0.1, ValueKind::BarValue).is_err());
        let mut pie = bars(&[]);
        pie.chart_type = ChartType::Pie;
        assert!(matches!(
            value_accuracy(&pie, &bars(&[]), &policy(LabelMode::Any, 0.1)),
            Err(EvalError::TypeMismatch { .. })
        ));
    }
}
