use charter_core::{BoxCategory, ChartType, HeatmapCategory};
use charter_oracle::DetectorOutput;

use crate::{AnalysisConfig, AnalysisError};

fn evidence(region: BoxCategory) -> &'static [HeatmapCategory] {
    use HeatmapCategory::*;
    match region {
        BoxCategory::BarChart => &[BarTopLeft, BarTopRight, BarBottomLeft, BarBottomRight],
        BoxCategory::PieChart => &[PieCenter, PieCircumference, PieRadial, PieCorner],
        BoxCategory::LineChart => &[LineKnee, Line],
        _ => &[ScatterDot],
    }
}

/// Chart type from the highest-scoring chart-region box. Equal scores are
/// broken by the total mass of the type's heatmaps; bar charts are vertical
/// unless horizontal bar boxes outscore vertical ones.
pub fn classify_chart(det: &DetectorOutput, config: &AnalysisConfig) -> Result<ChartType, AnalysisError> {
    let mass = |cat: BoxCategory| -> f64 {
        evidence(cat).iter().filter_map(|h| det.heatmap(*h)).map(|h| h.mass()).sum()
    };
    let best = det
        .boxes
        .iter()
        .filter(|b| b.category.is_chart_region() && b.score >= config.region_score_threshold)
        .map(|b| (b.category, b.score, mass(b.category)))
        .reduce(|a, b| {
            if b.1 > a.1 + 1e-12 || ((b.1 - a.1).abs() <= 1e-12 && b.2 > a.2) {
                b
            } else {
                a
            }
        })
        .ok_or(AnalysisError::NoChartRegion)?;
    Ok(match best.0 {
        BoxCategory::BarChart => {
            let sum = |c| det.boxes_of(c).map(|b| b.score).sum::<f64>();
            if sum(BoxCategory::HorizontalBar) > sum(BoxCategory::VerticalBar) {
                ChartType::Hbar
            } else {
                ChartType::Vbar
            }
        }
        BoxCategory::PieChart => ChartType::Pie,
        BoxCategory::LineChart => ChartType::Line,
        _ => ChartType::Scatter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use charter_core::{BBox, Heatmap};

    fn det(boxes: Vec<BBox>, hot: &[HeatmapCategory]) -> DetectorOutput {
        let mut d = DetectorOutput { raster_size: [64, 64], boxes, heatmaps: Default::default() };
        for c in HeatmapCategory::ALL {
            let mut h = Heatmap::zeros(16, 16, c).unwrap();
            if hot.contains(&c) {
                h.set(3, 3, 1.0);
            }
            d.heatmaps.insert(c, h);
        }
        d
    }

    fn region(cat: BoxCategory, score: f64) -> BBox {
        BBox::new(0.0, 0.0, 50.0, 50.0, cat, score).unwrap()
    }

    #[test]
    fn tie_goes_to_heatmap_evidence() {
        let boxes = vec![region(BoxCategory::BarChart, 0.8), region(BoxCategory::PieChart, 0.8)];
        let d = det(boxes.clone(), &[HeatmapCategory::BarTopLeft]);
        assert_eq!(classify_chart(&d, &AnalysisConfig::default()).unwrap(), ChartType::Vbar);
        let d = det(boxes, &[HeatmapCategory::PieCenter]);
        assert_eq!(classify_chart(&d, &AnalysisConfig::default()).unwrap(), ChartType::Pie);
    }

    #[test]
    fn highest_score_wins_and_bars_pick_orientation() {
        let mut boxes = vec![region(BoxCategory::LineChart, 0.6), region(BoxCategory::BarChart, 0.9)];
        boxes.push(BBox::new(1.0, 1.0, 5.0, 9.0, BoxCategory::HorizontalBar, 0.9).unwrap());
        let d = det(boxes, &[HeatmapCategory::Line]);
        assert_eq!(classify_chart(&d, &AnalysisConfig::default()).unwrap(), ChartType::Hbar);
    }

    #[test]
    fn no_region_is_an_error() {
        let d = det(vec![region(BoxCategory::ScatterPlot, 0.1)], &[]);
        assert!(matches!(classify_chart(&d, &AnalysisConfig::default()), Err(AnalysisError::NoChartRegion)));
    }
}
