use charter_core::{BoxCategory, ChartType, HeatmapCategory};
use charter_oracle::detector::{ground_truth_boxes, DetectorOutput};
use charter_oracle::numeric::is_superscript_of;
use charter_oracle::{numeric_tokens, simulate_detector, simulate_ocr, NoiseConfig};
use charter_synth::{emit_heatmaps, generate, HeatmapResolution, SynthConfig};

#[test]
fn zero_noise_is_identity() {
    let cfg = SynthConfig::default();
    for t in ChartType::ALL {
        let chart = generate(3, t, &cfg).unwrap();
        let det = simulate_detector(&chart.truth, &NoiseConfig::clean(), 9).unwrap();
        assert_eq!(det.boxes, ground_truth_boxes(&chart.truth));
        assert!(det.boxes.iter().all(|b| b.score == 1.0));
        let emitted = emit_heatmaps(&chart.truth, HeatmapResolution::default()).unwrap();
        for hm in emitted {
            assert_eq!(det.heatmaps[&hm.category()], hm);
        }
        let ocr = simulate_ocr(&chart.truth, &NoiseConfig::clean(), 9).unwrap();
        let want: Vec<String> = chart
            .truth
            .texts
            .iter()
            .flat_map(|t| std::iter::once(t.text.clone()).chain(t.superscript.clone()))
            .collect();
        let got: Vec<String> = ocr.tokens.iter().map(|t| t.text.clone()).collect();
        assert_eq!(got, want);
    }
}

#[test]
fn jitter_matches_half_normal_mean() {
    let cfg = SynthConfig { bar_count: [12, 12], ..Default::default() };
    let noise = NoiseConfig { box_jitter: 2.0, ..Default::default() };
    let (mut sum, mut n) = (0.0, 0usize);
    let mut seed = 0;
    while n < 40_000 {
        let chart = generate(seed, ChartType::Vbar, &cfg).unwrap();
        let truth = ground_truth_boxes(&chart.truth);
        let det = simulate_detector(&chart.truth, &noise, seed).unwrap();
        for (a, b) in truth.iter().zip(&det.boxes) {
            for (p, q) in [(a.x_min, b.x_min), (a.y_min, b.y_min), (a.x_max, b.x_max), (a.y_max, b.y_max)] {
                sum += (p - q).abs();
                n += 1;
            }
        }
        seed += 1;
    }
    let mean = sum / n as f64;
    let want = 2.0 * (2.0 / std::f64::consts::PI).sqrt();
    assert!((mean / want - 1.0).abs() <= 0.05, "mean displacement {mean} vs {want}");
}

#[test]
fn spurious_boxes_are_reproducible() {
    let chart = generate(1, ChartType::Vbar, &SynthConfig::default()).unwrap();
    let noise = NoiseConfig { false_positive_rate: 0.5, ..Default::default() };
    let a = simulate_detector(&chart.truth, &noise, 77).unwrap();
    let b = simulate_detector(&chart.truth, &noise, 77).unwrap();
    assert_eq!(a, b);
    let truth = ground_truth_boxes(&chart.truth).len();
    assert!(a.boxes.len() > truth);
    let c = simulate_detector(&chart.truth, &noise, 78).unwrap();
    assert_ne!(a.boxes, c.boxes);
}

#[test]
fn noisy_heatmaps_stay_in_range() {
    let chart = generate(2, ChartType::Pie, &SynthConfig::default()).unwrap();
    let det = simulate_detector(&chart.truth, &NoiseConfig::preset("harsh").unwrap(), 4).unwrap();
    for hm in det.heatmaps.values() {
        assert!(hm.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }
    assert!(det.heatmap(HeatmapCategory::PieCenter).unwrap().max_value() > 0.5);
}

#[test]
fn exponent_ticks_become_two_tokens() {
    let cfg = SynthConfig { p_exponent_ticks: 1.0, p_hidden_axes: 0.0, ..Default::default() };
    let chart = generate(4, ChartType::Vbar, &cfg).unwrap();
    let ocr = simulate_ocr(&chart.truth, &NoiseConfig::clean(), 0).unwrap();
    let mantissas: Vec<_> = ocr.tokens.iter().filter(|t| t.text == "10").collect();
    assert!(mantissas.len() >= 3);
    for m in mantissas {
        let sup = ocr.tokens.iter().find(|t| is_superscript_of(m, t)).expect("raised exponent token");
        assert!(sup.is_superscript_candidate);
        let (mb, sb) = (m.bbox(), sup.bbox());
        assert!(sb[1] < (mb[1] + mb[3]) / 2.0);
    }
    let values: Vec<f64> = numeric_tokens(&ocr.tokens).iter().filter(|n| n.exponent).map(|n| n.value).collect();
    let axis = &chart.truth.axes[0];
    let want: Vec<f64> = axis.ticks.iter().map(|t| t.value).collect();
    assert_eq!(values, want);
}

#[test]
fn detector_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let chart = generate(5, ChartType::Line, &SynthConfig::default()).unwrap();
    let det = simulate_detector(&chart.truth, &NoiseConfig::preset("mild").unwrap(), 1).unwrap();
    let path = dir.path().join("c5.det.json");
    det.write(&path).unwrap();
    let back = DetectorOutput::read(&path).unwrap();
    assert_eq!(back.boxes, det.boxes);
    for (cat, hm) in &det.heatmaps {
        let other = &back.heatmaps[cat];
        let err = hm.values().iter().zip(other.values()).map(|(a, b)| (a - b).abs()).fold(0.0f32, f32::max);
        assert!(err <= 1.0 / 65535.0 + 1e-6);
    }
    std::fs::remove_file(dir.path().join("c5.det.hm").join("line.png")).unwrap();
    assert!(DetectorOutput::read(&path).is_err());
    assert!(det.boxes_of(BoxCategory::LineChart).count() == 1);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]

    #[test]
    fn harsh_outputs_stay_valid(seed in 0u64..10_000, k in 0usize..5) {
        let t = ChartType::ALL[k];
        let chart = generate(seed, t, &SynthConfig::default()).unwrap();
        let noise = NoiseConfig::preset("harsh").unwrap();
        let det = simulate_detector(&chart.truth, &noise, seed).unwrap();
        for b in &det.boxes {
            proptest::prop_assert!(b.x_min < b.x_max && b.y_min < b.y_max);
            proptest::prop_assert!((0.0..=1.0).contains(&b.score));
        }
        for hm in det.heatmaps.values() {
            proptest::prop_assert!(hm.values().iter().all(|v| (0.0..=1.0).contains(v)));
        }
        proptest::prop_assert_eq!(&det, &simulate_detector(&chart.truth, &noise, seed).unwrap());
        let ocr = simulate_ocr(&chart.truth, &noise, seed).unwrap();
        for tok in &ocr.tokens {
            proptest::prop_assert!(tok.angle > -90.0 && tok.angle <= 90.0);
        }
    }

    #[test]
    fn baseline_digit_is_never_an_exponent(
        x in 0.0f64..500.0, bottom in 20.0f64..500.0, h in 6.0f64..30.0,
        scale in 0.3f64..1.0, gap in -0.2f64..0.6, shift in -0.2f64..0.2, d in 0u32..10,
    ) {
        let mantissa = charter_oracle::OcrToken::axis_aligned("10", [x, bottom - h, x + 1.2 * h, bottom]);
        let hd = h * scale;
        let x1 = x + 1.2 * h + gap * h;
        let b = bottom + shift * h;
        let digit = charter_oracle::OcrToken::axis_aligned(&d.to_string(), [x1, b - hd, x1 + 0.6 * hd, b]);
        let parsed = numeric_tokens(&[mantissa, digit]);
        proptest::prop_assert!(parsed.iter().all(|n| n.value != 10f64.powi(d as i32) || d == 1));
    }
}
