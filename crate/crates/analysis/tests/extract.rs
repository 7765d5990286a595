use charter_analysis::*;
use charter_core::{BBox, BoxCategory, ChartType, Color, Heatmap, HeatmapCategory, Orientation, Provenance, Raster};
use charter_oracle::{simulate_detector, simulate_ocr, DetectorOutput, NoiseConfig, OcrToken};
use charter_synth::{generate, GeneratedChart, SynthConfig};
use proptest::prelude::*;

const SIGMA2: f64 = 4.0 + 1.0 / 12.0;

fn empty_det(size: u32, hm: u32) -> DetectorOutput {
    let mut d = DetectorOutput { raster_size: [size, size], boxes: Vec::new(), heatmaps: Default::default() };
    for c in HeatmapCategory::ALL {
        d.heatmaps.insert(c, Heatmap::zeros(hm, hm, c).unwrap());
    }
    d
}

/// Paints `f(x, y)` into a heatmap by max.
fn paint(d: &mut DetectorOutput, cat: HeatmapCategory, f: impl Fn(f64, f64) -> f64) {
    let h = d.heatmaps.get_mut(&cat).unwrap();
    for y in 0..h.height() {
        for x in 0..h.width() {
            h.raise(x, y, f(x as f64, y as f64) as f32);
        }
    }
}

fn splat(c: [f64; 2]) -> impl Fn(f64, f64) -> f64 {
    move |x, y| (-((x - c[0]).powi(2) + (y - c[1]).powi(2)) / 8.0).exp()
}

fn ring(c: [f64; 2], r: f64) -> impl Fn(f64, f64) -> f64 {
    move |x, y| {
        let d = (x - c[0]).hypot(y - c[1]) - r;
        (-d * d / (2.0 * SIGMA2)).exp()
    }
}

fn ray(c: [f64; 2], r: f64, deg: f64) -> impl Fn(f64, f64) -> f64 {
    let (s, co) = deg.to_radians().sin_cos();
    let q = [c[0] + r * co, c[1] - r * s];
    move |x, y| {
        let (vx, vy) = (q[0] - c[0], q[1] - c[1]);
        let t = (((x - c[0]) * vx + (y - c[1]) * vy) / (vx * vx + vy * vy)).clamp(0.0, 1.0);
        let d2 = (x - c[0] - t * vx).powi(2) + (y - c[1] - t * vy).powi(2);
        (-d2 / (2.0 * SIGMA2)).exp()
    }
}

/// A pie in heatmap space (scale 4) with boundaries at `bounds`.
fn pie_det(c: [f64; 2], r: f64, bounds: &[f64]) -> DetectorOutput {
    let mut d = empty_det(512, 128);
    paint(&mut d, HeatmapCategory::PieCenter, splat(c));
    paint(&mut d, HeatmapCategory::PieCircumference, ring(c, r));
    for &b in bounds {
        paint(&mut d, HeatmapCategory::PieRadial, ray(c, r, b));
        let (s, co) = b.to_radians().sin_cos();
        paint(&mut d, HeatmapCategory::PieCorner, splat([c[0] + r * co, c[1] - r * s]));
    }
    d
}

fn clean(seed: u64, ty: ChartType) -> (GeneratedChart, DetectorOutput, Vec<OcrToken>) {
    let g = generate(seed, ty, &SynthConfig::default()).unwrap();
    let det = simulate_detector(&g.truth, &NoiseConfig::clean(), seed).unwrap();
    let ocr = simulate_ocr(&g.truth, &NoiseConfig::clean(), seed).unwrap();
    (g, det, ocr.tokens)
}

#[test]
fn clean_ring_radius_and_center() {
    let d = pie_det([64.0, 64.0], 25.0, &[]);
    let pies = fit_pies(&d, &AnalysisConfig::default());
    assert_eq!(pies.len(), 1);
    assert!((pies[0].radius - 100.0).abs() <= 1.0, "{:?}", pies[0]);
    assert!((pies[0].center[0] - 256.0).hypot(pies[0].center[1] - 256.0) <= 1.0);
    let sectors = extract_sectors(&pies[0], &d, &AnalysisConfig::default());
    assert_eq!(sectors.len(), 1);
    assert_eq!(sectors[0].span(), 360.0);
}

#[test]
fn two_pies_two_geometries() {
    let mut d = pie_det([32.0, 40.0], 14.0, &[]);
    paint(&mut d, HeatmapCategory::PieCenter, splat([95.0, 84.0]));
    paint(&mut d, HeatmapCategory::PieCircumference, ring([95.0, 84.0], 18.0));
    let mut pies = fit_pies(&d, &AnalysisConfig::default());
    assert_eq!(pies.len(), 2);
    pies.sort_by(|a, b| a.center[0].total_cmp(&b.center[0]));
    for (p, (c, r)) in pies.iter().zip([([128.0, 160.0], 56.0), ([380.0, 336.0], 72.0)]) {
        assert!((p.center[0] - c[0]).hypot(p.center[1] - c[1]) <= 2.0, "{p:?}");
        assert!((p.radius - r).abs() <= 2.0, "{p:?}");
    }
}

#[test]
fn zero_heatmaps_give_no_pies() {
    assert!(fit_pies(&empty_det(512, 128), &AnalysisConfig::default()).is_empty());
}

#[test]
fn sector_boundaries_from_rays() {
    let d = pie_det([64.0, 64.0], 28.0, &[0.0, 180.0, 288.0]);
    let cfg = AnalysisConfig::default();
    let g = &fit_pies(&d, &cfg)[0];
    let spans: Vec<f64> = extract_sectors(g, &d, &cfg).iter().map(|s| s.span()).collect();
    assert_eq!(spans.len(), 3);
    for (got, want) in spans.iter().zip([180.0, 108.0, 72.0]) {
        assert!((got - want).abs() < 0.1, "{spans:?}");
    }
}

#[test]
fn clean_five_slice_pies_within_two_degrees() {
    let cfg = AnalysisConfig::default();
    let mut checked = 0;
    for seed in 0..60 {
        let (g, det, _) = clean(seed, ChartType::Pie);
        let gt = &g.truth.pies[0];
        if gt.sectors.len() != 5 {
            continue;
        }
        checked += 1;
        let geom = &fit_pies(&det, &cfg)[0];
        let mut got = extract_sectors(geom, &det, &cfg);
        assert_eq!(got.len(), 5, "seed {seed}");
        for s in &gt.sectors {
            let k = got.iter().position(|p| p.contains(s.mid_deg().rem_euclid(360.0))).unwrap();
            assert!((got[k].span() - s.span()).abs() <= 2.0, "seed {seed}");
            got.remove(k);
        }
    }
    assert!(checked >= 3, "only {checked} five-slice pies");
}

#[test]
fn clean_charts_round_trip() {
    for ty in [ChartType::Vbar, ChartType::Hbar] {
        for seed in 0..10 {
            let (g, det, tokens) = clean(seed, ty);
            let t = analyze(&det, &tokens, &g.raster).unwrap();
            let gt = &g.truth.table;
            assert_eq!(t.rows.len(), gt.rows.len(), "{ty} seed {seed}");
            for (p, e) in t.rows.iter().zip(&gt.rows) {
                assert_eq!(p.label, e.label, "{ty} seed {seed}");
                assert!((p.value - e.value).abs() <= 1e-6 * e.value.abs().max(1.0), "{ty} seed {seed}: {p:?} vs {e:?}");
            }
            assert_eq!((&t.title, &t.caption), (&gt.title, &gt.caption));
            assert_eq!((&t.x_title, &t.y_title), (&gt.x_title, &gt.y_title));
        }
    }
}

#[test]
fn clean_connector_pies_round_trip() {
    let mut seen = 0;
    for seed in 0..80 {
        let (g, det, tokens) = clean(seed, ChartType::Pie);
        if g.spec.style.pie.unwrap().label_mode != charter_synth::PieLabelMode::Connector {
            continue;
        }
        seen += 1;
        let t = analyze(&det, &tokens, &g.raster).unwrap();
        for e in &g.truth.table.rows {
            let p = t.rows.iter().find(|p| p.label == e.label).unwrap_or_else(|| panic!("seed {seed}: {}", e.label));
            assert_eq!(p.label_source, Provenance::Connector);
            assert!((p.value - e.value).abs() * 360.0 <= 0.5, "seed {seed}");
        }
    }
    assert!(seen >= 5);
}

#[test]
fn no_chart_is_a_structured_error() {
    let d = empty_det(64, 16);
    let r = Raster::new(64, 64, Color::WHITE).unwrap();
    let e = analyze(&d, &[], &r).unwrap_err();
    assert_eq!(e, AnalysisError::NoChartRegion);
    assert_eq!(e.kind(), "no_chart");
    let wrong = Raster::new(32, 64, Color::WHITE).unwrap();
    assert_eq!(analyze(&d, &[], &wrong).unwrap_err().kind(), "invalid_input");
}

#[test]
fn title_year_is_not_an_axis_label() {
    let mut t: Vec<OcrToken> = [("0", 400.0), ("10", 300.0), ("20", 200.0)]
        .iter()
        .map(|(s, y)| OcrToken::axis_aligned(s, [70.0 - 6.0 * s.len() as f64, y - 5.0, 70.0, y + 5.0]))
        .collect();
    t.push(OcrToken::axis_aligned("2019", [200.0, 10.0, 230.0, 24.0]));
    let a = recover_axis(&t, Orientation::Y, &[], &AnalysisConfig::default()).unwrap();
    assert_eq!(a.support.len(), 3);
    assert!(a.support.iter().all(|s| s[1] <= 20.0));
    assert!(recover_axis(&[], Orientation::Y, &[], &AnalysisConfig::default()).is_none());
}

fn bar_scene(boxes: &[[f64; 4]]) -> (DetectorOutput, Raster) {
    let mut d = empty_det(256, 64);
    let mut r = Raster::new(256, 256, Color::WHITE).unwrap();
    for b in boxes {
        d.boxes.push(BBox::new(b[0], b[1], b[2], b[3], BoxCategory::VerticalBar, 0.9).unwrap());
        for y in b[1].ceil() as u32..=b[3].floor() as u32 {
            for x in b[0].ceil() as u32..=b[2].floor() as u32 {
                r.put(x, y, Color::new(40, 120, 200));
            }
        }
    }
    (d, r)
}

#[test]
fn wide_false_positive_is_filtered() {
    let (mut d, r) = bar_scene(&[[20.0, 100.0, 40.0, 200.0], [60.0, 150.0, 80.0, 200.0], [100.0, 50.0, 120.0, 200.0]]);
    d.boxes.push(BBox::new(130.0, 120.0, 190.0, 200.0, BoxCategory::VerticalBar, 0.95).unwrap());
    let axis = AxisModel {
        orientation: Orientation::Y,
        scale: Default::default(),
        slope: -1.0,
        intercept: 200.0,
        support: vec![],
        title: None,
    };
    let bars = extract_bars(&d, ChartType::Vbar, Some(&axis), &[], &[], &r, &[], &AnalysisConfig::default()).unwrap();
    let values: Vec<f64> = bars.iter().map(|b| b.value).collect();
    assert_eq!(values, vec![100.0, 50.0, 150.0]);
    assert!(bars.iter().all(|b| b.value_source == Provenance::AxisInterpolated));
}

#[test]
fn hidden_axis_reads_value_above_bar() {
    let (d, r) = bar_scene(&[[20.0, 100.0, 40.0, 200.0]]);
    let tokens = vec![
        OcrToken::axis_aligned("12", [24.0, 87.0, 36.0, 97.0]),
        OcrToken::axis_aligned("Apples", [12.0, 206.0, 48.0, 216.0]),
    ];
    let bars = extract_bars(&d, ChartType::Vbar, None, &tokens, &[0, 1], &r, &[], &AnalysisConfig::default()).unwrap();
    assert_eq!(bars[0].value, 12.0);
    assert_eq!(bars[0].value_source, Provenance::ValueOnBar);
    assert_eq!(bars[0].label, "Apples");
    let none = extract_bars(&empty_det(256, 64), ChartType::Vbar, None, &[], &[], &r, &[], &AnalysisConfig::default());
    assert_eq!(none.unwrap_err(), AnalysisError::NoElements("bar"));
}

#[test]
fn jittered_swatches_still_match() {
    let entries: Vec<LegendEntry> = [(200, 30, 30), (30, 200, 30), (30, 30, 200)]
        .iter()
        .enumerate()
        .map(|(i, &(r, g, b))| LegendEntry {
            label: format!("e{i}"),
            color: Some(Color::new(r + 10, g - 10, b + 10)),
            swatch: None,
            token: i,
        })
        .collect();
    let colors = [Some(Color::new(30, 30, 200)), Some(Color::new(200, 30, 30)), Some(Color::new(30, 200, 30))];
    assert_eq!(match_legend(&entries, &colors, &AnalysisConfig::default()), vec![Some(2), Some(0), Some(1)]);
}

#[test]
fn connector_stroke_names_sector() {
    let mut r = Raster::new(400, 400, Color::WHITE).unwrap();
    let (c, rad) = ([200.0, 200.0], 100.0);
    for y in 0..400u32 {
        for x in 0..400u32 {
            if (x as f64 - c[0]).hypot(y as f64 - c[1]) <= rad {
                r.put(x, y, if x < 200 { Color::new(220, 60, 60) } else { Color::new(60, 60, 220) });
            }
        }
    }
    // Stroke along 0° from 0.75r to 1.2r, label beyond it.
    for x in 275..=320u32 {
        r.put(x, 200, Color::BLACK);
        r.put(x, 201, Color::BLACK);
    }
    let tokens = vec![OcrToken::axis_aligned("Other", [324.0, 195.0, 354.0, 205.0])];
    for x in 326..352u32 {
        r.put(x, 200, Color::BLACK);
    }
    let geom = PieGeometry { center: c, radius: rad, support: 1.0, sectors: sectors_from_bounds(vec![90.0, 270.0]) };
    let labels = label_sectors(&geom, &r, &tokens, &[0], &[], Some(Color::BLACK), &AnalysisConfig::default());
    assert_eq!(labels[1].label, "Other");
    assert_eq!(labels[1].source, Provenance::Connector);
    assert_eq!(labels[0].label, "sector_1");
}

#[test]
fn legend_labels_sectors() {
    let geom = PieGeometry {
        center: [100.0, 100.0],
        radius: 50.0,
        support: 1.0,
        sectors: vec![
            PieSector { start: 0.0, end: 90.0, color: Some(Color::new(200, 0, 0)), textured: false },
            PieSector { start: 90.0, end: 360.0, color: Some(Color::new(0, 0, 200)), textured: false },
        ],
    };
    let legend = vec![
        LegendEntry { label: "blue".into(), color: Some(Color::new(0, 0, 200)), swatch: None, token: 0 },
        LegendEntry { label: "red".into(), color: Some(Color::new(200, 0, 0)), swatch: None, token: 1 },
    ];
    let r = Raster::new(200, 200, Color::WHITE).unwrap();
    let labels = label_sectors(&geom, &r, &[], &[], &legend, None, &AnalysisConfig::default());
    assert_eq!(labels.iter().map(|l| l.label.as_str()).collect::<Vec<_>>(), ["red", "blue"]);
    assert!(labels.iter().all(|l| l.source == Provenance::Legend));
}

/// Line scene: polylines of given colours, optionally dashed, with matching heatmaps.
fn line_scene(lines: &[(Color, Vec<[f64; 2]>, bool)]) -> (DetectorOutput, Raster) {
    let mut d = empty_det(256, 64);
    let mut r = Raster::new(256, 256, Color::WHITE).unwrap();
    for (color, pts, dashed) in lines {
        for w in pts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let len = (b[0] - a[0]).hypot(b[1] - a[1]);
            let steps = (len * 4.0) as usize;
            for k in 0..=steps {
                let t = k as f64 / steps as f64;
                let along = t * len;
                if *dashed && along % 16.0 >= 10.0 {
                    continue;
                }
                let p = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
                for (dx, dy) in [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0)] {
                    r.put_checked((p[0] + dx).round() as i64, (p[1] + dy).round() as i64, *color);
                }
            }
            let (ha, hb) = ([a[0] / 4.0, a[1] / 4.0], [b[0] / 4.0, b[1] / 4.0]);
            paint(&mut d, HeatmapCategory::Line, move |x, y| {
                let (vx, vy) = (hb[0] - ha[0], hb[1] - ha[1]);
                let t = (((x - ha[0]) * vx + (y - ha[1]) * vy) / (vx * vx + vy * vy)).clamp(0.0, 1.0);
                let d2 = (x - ha[0] - t * vx).powi(2) + (y - ha[1] - t * vy).powi(2);
                (-d2 / (2.0 * SIGMA2)).exp()
            });
        }
        for p in pts {
            paint(&mut d, HeatmapCategory::LineKnee, splat([p[0] / 4.0, p[1] / 4.0]));
        }
    }
    (d, r)
}

fn identity_axes() -> (AxisModel, AxisModel) {
    let a = |o| AxisModel { orientation: o, scale: Default::default(), slope: 1.0, intercept: 0.0, support: vec![], title: None };
    (a(Orientation::X), a(Orientation::Y))
}

#[test]
fn clean_polyline_recovered() {
    let pts = vec![[20.0, 200.0], [80.0, 120.0], [140.0, 160.0], [220.0, 40.0]];
    let (d, r) = line_scene(&[(Color::new(200, 40, 40), pts.clone(), false)]);
    let (x, y) = identity_axes();
    let s = extract_lines(&d, &r, Some(&x), Some(&y), &[], None, &AnalysisConfig::default());
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].label, "series_1");
    assert_eq!(s[0].points.len(), 4);
    for (p, q) in s[0].points.iter().zip(&pts) {
        assert!((p[0] - q[0]).abs() <= 2.56 && (p[1] - q[1]).abs() <= 2.56, "{p:?} vs {q:?}");
    }
}

#[test]
fn dashed_line_is_one_series() {
    let pts = vec![[20.0, 60.0], [120.0, 100.0], [230.0, 80.0]];
    let (d, r) = line_scene(&[(Color::new(30, 140, 60), pts, true)]);
    let s = extract_lines(&d, &r, None, None, &[], None, &AnalysisConfig::default());
    assert_eq!(s.len(), 1);
    assert!(!s[0].calibrated);
    assert_eq!(s[0].pixels.len(), 3);
}

#[test]
fn crossing_lines_keep_their_colours() {
    let a = (Color::new(200, 40, 40), vec![[20.0, 200.0], [120.0, 60.0], [230.0, 180.0]], false);
    let b = (Color::new(40, 40, 200), vec![[20.0, 60.0], [120.0, 200.0], [230.0, 50.0]], false);
    let (d, r) = line_scene(&[a.clone(), b.clone()]);
    let s = extract_lines(&d, &r, None, None, &[], None, &AnalysisConfig::default());
    assert_eq!(s.len(), 2);
    for want in [a, b] {
        let series = s.iter().find(|x| x.color == want.0).unwrap();
        assert_eq!(series.pixels.len(), 3);
        for (p, q) in series.pixels.iter().zip(&want.1) {
            assert!((p[0] - q[0]).abs() < 1.0 && (p[1] - q[1]).abs() < 1.0);
        }
    }
}

#[test]
fn scatter_dots_and_resolution_limit() {
    let mut d = empty_det(256, 64);
    let mut r = Raster::new(256, 256, Color::WHITE).unwrap();
    let mut dots = Vec::new();
    for i in 0..20 {
        let p = [16.0 + 44.0 * (i % 5) as f64 + 0.3 * i as f64, 20.0 + 52.0 * (i / 5) as f64];
        dots.push(p);
        paint(&mut d, HeatmapCategory::ScatterDot, splat([p[0] / 4.0, p[1] / 4.0]));
        for dy in -3..=3 {
            for dx in -3..=3 {
                r.put_checked(p[0] as i64 + dx, p[1] as i64 + dy, Color::new(200, 100, 0));
            }
        }
    }
    let (x, y) = identity_axes();
    let s = extract_scatter(&d, &r, Some(&x), Some(&y), &[], &AnalysisConfig::default());
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].points.len(), 20);
    for q in &dots {
        assert!(s[0].points.iter().any(|p| (p[0] - q[0]).abs() <= 2.56 && (p[1] - q[1]).abs() <= 2.56));
    }

    let mut d = empty_det(256, 64);
    paint(&mut d, HeatmapCategory::ScatterDot, splat([30.0, 30.0]));
    paint(&mut d, HeatmapCategory::ScatterDot, splat([33.0, 30.0]));
    let s = extract_scatter(&d, &r, None, None, &[], &AnalysisConfig::default());
    assert_eq!(s.iter().map(|s| s.points.len()).sum::<usize>(), 1);
    assert!(extract_scatter(&empty_det(256, 64), &r, None, None, &[], &AnalysisConfig::default()).is_empty());
}

#[test]
fn analysis_is_deterministic() {
    for ty in ChartType::ALL {
        let g = generate(3, ty, &SynthConfig::default()).unwrap();
        let noise = NoiseConfig::preset("mild").unwrap();
        let det = simulate_detector(&g.truth, &noise, 3).unwrap();
        let ocr = simulate_ocr(&g.truth, &noise, 3).unwrap();
        let a = analyze(&det, &ocr.tokens, &g.raster).unwrap().to_json().unwrap();
        let b = analyze(&det, &ocr.tokens, &g.raster).unwrap().to_json().unwrap();
        assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn spans_sum_to_full_circle(seed in 0u64..400, preset in 0usize..3) {
        let noise = NoiseConfig::preset(["clean", "mild", "harsh"][preset]).unwrap();
        let g = generate(seed, ChartType::Pie, &SynthConfig::default()).unwrap();
        let det = simulate_detector(&g.truth, &noise, seed).unwrap();
        let cfg = AnalysisConfig::default();
        for geom in fit_pies(&det, &cfg) {
            let total: f64 = extract_sectors(&geom, &det, &cfg).iter().map(|s| s.span()).sum();
            prop_assert!((total - 360.0).abs() <= 0.5);
        }
        let boxes: Vec<BBox> = det.boxes_of(BoxCategory::PieSector).cloned().collect();
        if let Some(geom) = pie_from_boxes(&boxes, &cfg) {
            let total: f64 = geom.sectors.iter().map(|s| s.span()).sum();
            prop_assert!((total - 360.0).abs() <= 0.5);
        }
    }

    #[test]
    fn axis_fit_ignores_token_order(
        values in proptest::collection::btree_set(0i32..50, 3..8),
        shuffle in proptest::collection::vec(any::<u32>(), 8),
    ) {
        let tokens: Vec<OcrToken> = values
            .iter()
            .map(|&v| {
                let y = 450.0 - 8.0 * v as f64;
                let s = (v * 5).to_string();
                OcrToken::axis_aligned(&s, [60.0 - 6.0 * s.len() as f64, y - 5.0, 60.0, y + 5.0])
            })
            .collect();
        let cfg = AnalysisConfig::default();
        let a = recover_axis(&tokens, Orientation::Y, &[], &cfg).unwrap();
        let mut perm = tokens.clone();
        for (i, k) in shuffle.iter().enumerate().take(perm.len()) {
            let j = *k as usize % perm.len();
            perm.swap(i, j);
        }
        let b = recover_axis(&perm, Orientation::Y, &[], &cfg).unwrap();
        prop_assert!(((a.slope - b.slope) / a.slope).abs() <= 1e-6);
        prop_assert!((a.intercept - b.intercept).abs() <= 1e-6 * a.intercept.abs().max(1.0));
        for s in &a.support {
            prop_assert!((a.pixel_at(s[1]) - s[0]).abs() <= cfg.axis_residual_tolerance);
        }
    }

    #[test]
    fn bar_values_follow_top_edges(seed in 0u64..300, mild in any::<bool>()) {
        let noise = if mild { NoiseConfig::preset("mild").unwrap() } else { NoiseConfig::clean() };
        let g = generate(seed, ChartType::Vbar, &SynthConfig::default()).unwrap();
        let det = simulate_detector(&g.truth, &noise, seed).unwrap();
        let ocr = simulate_ocr(&g.truth, &noise, seed).unwrap();
        let cfg = AnalysisConfig::default();
        let (_, trace) = analyze_traced(&det, &ocr.tokens, &g.raster, &cfg, PieMethod::Heatmaps).unwrap();
        if trace.y_axis.is_some() {
            for a in &trace.bars {
                for b in &trace.bars {
                    // Values are read at the top edge; the bottom edge is noisy.
                    if a.bbox[1] + 0.5 < b.bbox[1] {
                        prop_assert!(a.value >= b.value);
                    }
                }
            }
        }
    }
}
