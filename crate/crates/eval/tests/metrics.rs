use charter_core::{BBox, BoxCategory, ChartTable, ChartType, Provenance, TableRow};
use charter_eval::*;
use proptest::prelude::*;

/// All strings over {a, b} up to `max` chars, shortest first.
fn ab_strings(max: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut k = 0;
    while k < out.len() {
        if out[k].len() < max {
            for c in ['a', 'b'] {
                let s = format!("{}{c}", out[k]);
                out.push(s);
            }
        }
        k += 1;
    }
    out
}

/// Visits every `t` over {a, b} up to `max` chars depth-first, extending the
/// edit-distance DP row by row, and calls `f(t, L(s, t))`.
fn dp_walk(s: &[u8], t: &mut Vec<u8>, row: &[usize], max: usize, f: &mut impl FnMut(&[u8], usize)) {
    f(t, row[s.len()]);
    if t.len() == max {
        return;
    }
    for c in [b'a', b'b'] {
        let mut next = vec![row[0] + 1; s.len() + 1];
        for i in 1..=s.len() {
            let sub = row[i - 1] + (s[i - 1] != c) as usize;
            next[i] = sub.min(row[i] + 1).min(next[i - 1] + 1);
        }
        t.push(c);
        dp_walk(s, t, &next, max, f);
        t.pop();
    }
}

#[test]
fn levenshtein_ratio_matches_dp_exhaustively() {
    let max = 9;
    let mut checked = 0u64;
    for s in ab_strings(max) {
        let row: Vec<usize> = (0..=s.len()).collect();
        dp_walk(s.as_bytes(), &mut Vec::new(), &row, max, &mut |t, l| {
            let t = std::str::from_utf8(t).unwrap();
            let total = s.len() + t.len();
            let want = if total == 0 { 1.0 } else { (total - l) as f64 / total as f64 };
            assert_eq!(levenshtein_ratio(&s, t), want, "{s:?} {t:?}");
            checked += 1;
        });
    }
    assert_eq!(checked, 1023 * 1023);
}

fn row(label: String, value: f64) -> TableRow {
    TableRow { label, value, label_source: Provenance::GroundTruth, value_source: Provenance::GroundTruth, confidence: 1.0 }
}

fn arb_label() -> impl Strategy<Value = String> {
    "[abc]{0,4}"
}

/// A GT table and a perturbed prediction of the same type.
fn arb_pair() -> impl Strategy<Value = (ChartTable, ChartTable)> {
    let kind = prop_oneof![Just(ChartType::Vbar), Just(ChartType::Pie), Just(ChartType::Line)];
    (
        kind,
        proptest::collection::vec((arb_label(), -1.0f64..100.0, arb_label(), -0.3f64..0.3, any::<bool>()), 0..7),
        proptest::collection::vec((arb_label(), 0.0f64..100.0), 0..3),
    )
        .prop_map(|(ty, elems, extra)| {
            let mut gt = ChartTable::new(ty);
            let mut pred = ChartTable::new(ty);
            let v = |x: f64| if x < 0.0 { 0.0 } else { x };
            match ty {
                ChartType::Line => {
                    gt.x_range = Some([0.0, 10.0]);
                    gt.value_range = Some([0.0, 100.0]);
                    for (k, chunk) in elems.chunks(3).enumerate() {
                        let pts = |jit: bool| -> Vec<[f64; 2]> {
                            chunk
                                .iter()
                                .enumerate()
                                .map(|(i, e)| if jit { [i as f64 + e.3, v(e.1) * (1.0 + e.3)] } else { [i as f64, v(e.1)] })
                                .collect()
                        };
                        gt.series.push(charter_core::Series {
                            label: chunk[0].0.clone(),
                            points: pts(false),
                            label_source: Provenance::GroundTruth,
                            value_source: Provenance::GroundTruth,
                            confidence: 1.0,
                        });
                        if !chunk[0].4 || k == 0 {
                            pred.series.push(charter_core::Series { label: chunk[0].2.clone(), points: pts(true), ..gt.series[k].clone() });
                        }
                    }
                }
                _ => {
                    gt.value_range = Some([0.0, 100.0]);
                    for e in &elems {
                        gt.rows.push(row(e.0.clone(), v(e.1)));
                        if !e.4 {
                            pred.rows.push(row(e.2.clone(), v(e.1) * (1.0 + e.3)));
                        }
                    }
                    pred.rows.extend(extra.into_iter().map(|(l, x)| row(l, x)));
                }
            }
            (gt, pred)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn accuracy_is_monotone((gt, pred) in arb_pair(), pairing in prop_oneof![Just(Pairing::Label), Just(Pairing::Positional)]) {
        let kind = ValueKind::for_chart(gt.chart_type);
        let eps = [0.001, 0.01, 0.05, 0.1, 0.25, 1.0];
        let taus = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
        let acc = |mode, e| {
            let p = MatchPolicy::new(mode, e, kind).unwrap().with_pairing(pairing);
            value_accuracy(&pred, &gt, &p).unwrap()
        };
        for mode in taus.iter().map(|&t| LabelMode::RLevThreshold(t)).chain([LabelMode::Any]) {
            let mut last = 0;
            for &e in &eps {
                let a = acc(mode, e);
                prop_assert!(a.value_tp <= a.matched && a.matched <= a.gt_count);
                prop_assert!((0.0..=1.0).contains(&a.accuracy()));
                prop_assert!(a.value_tp >= last);
                last = a.value_tp;
            }
        }
        for &e in &eps {
            let mut last = usize::MAX;
            for &t in &taus {
                let a = acc(LabelMode::RLevThreshold(t), e);
                prop_assert!(a.value_tp <= last);
                last = a.value_tp;
            }
        }
    }

    #[test]
    fn ratio_is_symmetric_and_bounded(s in "[a-cA-C ]{0,10}", t in "[a-cA-C ]{0,10}") {
        let r = levenshtein_ratio(&s, &t);
        prop_assert_eq!(r, levenshtein_ratio(&t, &s));
        prop_assert!((0.0..=1.0).contains(&r));
        prop_assert_eq!(r == 1.0, normalize_label(&s) == normalize_label(&t));
    }
}

fn bbox(x: u8, y: u8, w: u8, h: u8, score: f64) -> BBox {
    let (x, y) = (x as f64 * 3.0, y as f64 * 3.0);
    BBox::new(x, y, x + 6.0 + 3.0 * w as f64, y + 6.0 + 3.0 * h as f64, BoxCategory::PieSector, score).unwrap()
}

/// All-point interpolated AP of a labelled ranking, computed directly from
/// the definition: at each recall step, the best precision at that recall
/// or beyond.
fn ap_of(tp: &[bool], n_gt: usize) -> f64 {
    let pr: Vec<(f64, f64)> = (1..=tp.len())
        .map(|k| {
            let hits = tp[..k].iter().filter(|&&t| t).count() as f64;
            (hits / n_gt as f64, hits / k as f64)
        })
        .collect();
    let mut ap = 0.0;
    let mut prev = 0.0;
    for &(r, _) in &pr {
        if r > prev {
            let best = pr.iter().filter(|q| q.0 >= r).map(|q| q.1).fold(0.0, f64::max);
            ap += (r - prev) * best;
            prev = r;
        }
    }
    ap
}

/// Best AP over every one-to-one matching of predictions to GT boxes.
fn brute_ap(pred: &[BBox], gt: &[BBox], thr: f64) -> f64 {
    if gt.is_empty() {
        return if pred.is_empty() { 1.0 } else { 0.0 };
    }
    let mut order: Vec<usize> = (0..pred.len()).collect();
    order.sort_by(|&a, &b| pred[b].score.total_cmp(&pred[a].score));
    fn rec(k: usize, order: &[usize], pred: &[BBox], gt: &[BBox], thr: f64, used: &mut Vec<bool>, tp: &mut Vec<bool>, best: &mut f64) {
        if k == order.len() {
            *best = best.max(ap_of(tp, gt.len()));
            return;
        }
        tp.push(false);
        rec(k + 1, order, pred, gt, thr, used, tp, best);
        tp.pop();
        for g in 0..gt.len() {
            if !used[g] && charter_core::iou(&pred[order[k]], &gt[g]) >= thr {
                used[g] = true;
                tp.push(true);
                rec(k + 1, order, pred, gt, thr, used, tp, best);
                tp.pop();
                used[g] = false;
            }
        }
    }
    let mut best = 0.0;
    rec(0, &order, pred, gt, thr, &mut vec![false; gt.len()], &mut Vec::new(), &mut best);
    best
}

fn arb_boxes() -> impl Strategy<Value = Vec<BBox>> {
    proptest::collection::vec((0u8..4, 0u8..2, 0u8..3, 0u8..2, 0u8..4), 0..=4)
        .prop_map(|v| v.into_iter().map(|(x, y, w, h, s)| bbox(x, y, w, h, s as f64 / 4.0)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn ap_matches_enumerated_matchings(pred in arb_boxes(), gt in arb_boxes(), thr in prop_oneof![Just(0.3), Just(0.5), Just(0.7)]) {
        let got = detection_ap(&pred, &gt, thr);
        let want = brute_ap(&pred, &gt, thr);
        prop_assert!((got - want).abs() < 1e-12, "{} vs {}", got, want);
    }
}

#[test]
fn ablation_rejects_empty_dataset() {
    let r = ablation_report(&[], &charter_oracle::NoiseConfig::clean(), &[0.05], &Default::default());
    assert!(matches!(r, Err(EvalError::EmptyDataset)));
}

#[test]
fn clean_ablation_is_near_perfect_and_reproducible() {
    let cfg = charter_synth::SynthConfig::default();
    let charts: Vec<_> = (0..12).map(|s| charter_synth::generate(s, ChartType::Pie, &cfg).unwrap()).collect();
    let run = || ablation_report(&charts, &charter_oracle::NoiseConfig::clean(), &[0.05], &Default::default()).unwrap();
    let a = run();
    for &t in &ABLATION_TAUS {
        let (boxes, heat) = a.pair(t, 0.05).unwrap();
        assert!(heat >= 0.95, "tau {t}: {heat}");
        assert!(boxes >= 0.8, "tau {t}: {boxes}");
    }
    assert_eq!(a.to_json().unwrap(), run().to_json().unwrap());
    let md = a.to_markdown();
    assert_eq!(md.lines().count(), 6);
    assert!(md.lines().nth(2).unwrap().starts_with("| Sectors with R_Lev >= 1.0 (exact labels) |"));
    assert_eq!(a.to_csv().lines().count(), 5);
}

#[test]
fn empty_report_inputs() {
    let gt = ChartTable::new(ChartType::Vbar);
    let items = [EvalItem { id: "x", gt: &gt, pred: Some(&gt) }];
    let r = evaluate(ChartType::Vbar, &items, &DEFAULT_EPSILONS, &Condition::defaults(&[1.0])).unwrap();
    assert!(r.rows.iter().flat_map(|r| &r.cells).all(|c| c.accuracy == 1.0));
    assert!(evaluate(ChartType::Vbar, &items, &[], &[]).is_err());
    assert!(evaluate(ChartType::Pie, &items, &[0.1], &[]).is_err());
}
