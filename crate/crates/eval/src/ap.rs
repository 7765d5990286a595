//! Single-class detection average precision.

use charter_core::{iou, BBox};

/// AP of `pred` against `gt` at `iou >= iou_threshold`.
///
/// Predictions are taken in descending score order (ties keep input order).
/// Each one is a TP if it can join the matching built so far, possibly by
/// moving earlier predictions to other GT boxes they also overlap; so every
/// rank holds the largest number of TPs any one-to-one matching allows. The
/// PR curve is integrated with all-point interpolation. With no GT boxes the
/// AP is 1 for no predictions and 0 otherwise.
pub fn detection_ap(pred: &[BBox], gt: &[BBox], iou_threshold: f64) -> f64 {
    if gt.is_empty() {
        return if pred.is_empty() { 1.0 } else { 0.0 };
    }
    let mut order: Vec<usize> = (0..pred.len()).collect();
    order.sort_by(|&a, &b| pred[b].score.total_cmp(&pred[a].score));
    let adj: Vec<Vec<usize>> =
        order.iter().map(|&p| (0..gt.len()).filter(|&g| iou(&pred[p], &gt[g]) >= iou_threshold).collect()).collect();

    let mut owner: Vec<Option<usize>> = vec![None; gt.len()];
    let tp: Vec<bool> = (0..order.len())
        .map(|k| {
            let mut seen = vec![false; gt.len()];
            augment(k, &adj, &mut owner, &mut seen)
        })
        .collect();
    average_precision(&tp, gt.len())
}

fn augment(k: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &g in &adj[k] {
        if seen[g] {
            continue;
        }
        seen[g] = true;
        if owner[g].map_or(true, |o| augment(o, adj, owner, seen)) {
            owner[g] = Some(k);
            return true;
        }
    }
    false
}

/// All-point interpolated AP of a ranked TP/FP sequence.
pub fn average_precision(tp: &[bool], gt_count: usize) -> f64 {
    let mut precision = Vec::with_capacity(tp.len());
    let mut recall = Vec::with_capacity(tp.len());
    let mut hits = 0usize;
    for (k, &t) in tp.iter().enumerate() {
        hits += t as usize;
        precision.push(hits as f64 / (k + 1) as f64);
        recall.push(hits as f64 / gt_count as f64);
    }
    for k in (0..precision.len().saturating_sub(1)).rev() {
        precision[k] = precision[k].max(precision[k + 1]);
    }
    let mut ap = 0.0;
    let mut prev = 0.0;
    for k in 0..tp.len() {
        if recall[k] > prev {
            ap += (recall[k] - prev) * precision[k];
            prev = recall[k];
        }
    }
    ap
}
