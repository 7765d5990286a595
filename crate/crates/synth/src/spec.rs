//! Chart specifications and the seeded sampler.

use charter_core::{AxisScale, ChartTable, ChartType, Color, Provenance, Series, TableRow};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::texture::{Texture, TextureKind};
use crate::{words, Result, SynthConfig, SynthError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    pub seed: u64,
    pub chart_type: ChartType,
    pub canvas: [u32; 2],
    pub series: Vec<SeriesSpec>,
    /// One colour per series.
    pub colors: Vec<Color>,
    pub style: Style,
    pub title: Option<String>,
    pub caption: Option<String>,
    pub x_title: Option<String>,
    pub y_title: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesSpec {
    pub label: String,
    pub data: SeriesData,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesData {
    /// Bar value or pie fraction.
    Scalar(f64),
    /// Line vertices or scatter dots in data units.
    Points(Vec<[f64; 2]>),
}

impl SeriesData {
    pub fn scalar(&self) -> Option<f64> {
        match self {
            Self::Scalar(v) => Some(*v),
            Self::Points(_) => None,
        }
    }

    pub fn points(&self) -> &[[f64; 2]] {
        match self {
            Self::Scalar(_) => &[],
            Self::Points(p) => p,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Style {
    pub background: Color,
    pub text_color: Color,
    pub border: Option<Border>,
    pub background_texture: Option<Texture>,
    pub element_texture: Option<Texture>,
    /// All bars or slices share `colors[0]`.
    pub uniform_color: bool,
    pub legend: Option<LegendPosition>,
    /// Hides axis lines, tick marks and numeric tick labels.
    pub axes_hidden: bool,
    /// Category label rotation in degrees (0 or 45).
    pub label_rotation: f64,
    pub value_on_bar: bool,
    /// Empty fraction of each bar slot.
    pub bar_gap: f64,
    pub tick_format: TickFormat,
    /// Decimals used when printing bar values.
    pub value_decimals: u8,
    /// Value axis for bars, y axis for line/scatter.
    pub value_axis: Option<AxisSpec>,
    pub x_axis: Option<AxisSpec>,
    pub pie: Option<PieStyle>,
    /// Per-series dash flag for line charts.
    pub dashed: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Border {
    pub color: Color,
    pub width: f64,
    pub dashed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LegendPosition {
    Right,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieLabelMode {
    Legend,
    Connector,
    Adjacent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PieStyle {
    pub label_mode: PieLabelMode,
    /// Angle of the first sector's start, degrees counter-clockwise from +x.
    pub start_angle: f64,
    pub radius: f64,
    /// Background-coloured lines drawn along sector boundaries.
    pub separators: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub scale: AxisScale,
    pub min: f64,
    pub max: f64,
    pub ticks: Vec<f64>,
    /// Decimals used when printing tick values.
    pub decimals: u8,
}

impl AxisSpec {
    pub fn range(&self) -> [f64; 2] {
        [self.min, self.max]
    }

    /// Position of `value` as a fraction of the axis extent.
    pub fn fraction(&self, value: f64) -> f64 {
        let (a, b, v) = (self.scale.forward(self.min), self.scale.forward(self.max), self.scale.forward(value));
        (v - a) / (b - a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TickFormat {
    Plain,
    Thousands,
    Currency,
    /// Powers of ten printed as "10" with a raised exponent.
    Exponent,
}

impl TickFormat {
    /// Printed text and, for exponent notation, the superscript.
    pub fn format(&self, value: f64, decimals: u8) -> (String, Option<String>) {
        match self {
            Self::Plain => (format!("{value:.*}", decimals as usize), None),
            Self::Thousands => (group_thousands(&format!("{value:.*}", decimals as usize)), None),
            Self::Currency => (format!("${value:.*}", decimals as usize), None),
            Self::Exponent => ("10".to_string(), Some(format!("{}", value.log10().round() as i64))),
        }
    }
}

fn group_thousands(s: &str) -> String {
    let (int, frac) = match s.find('.') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let (sign, digits) = int.strip_prefix('-').map_or(("", int), |d| ("-", d));
    let mut out = String::new();
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    format!("{sign}{out}{frac}")
}

impl ChartSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        if self.series.is_empty() {
            return bad("no series".into());
        }
        if self.colors.len() != self.series.len() {
            return bad(format!("{} colours for {} series", self.colors.len(), self.series.len()));
        }
        match self.chart_type {
            ChartType::Vbar | ChartType::Hbar | ChartType::Pie => {
                let mut sum = 0.0;
                for s in &self.series {
                    match s.data.scalar() {
                        Some(v) if v.is_finite() => sum += v,
                        _ => return bad(format!("series {:?} needs a finite scalar", s.label)),
                    }
                }
                if self.chart_type == ChartType::Pie {
                    if self.series.iter().any(|s| s.data.scalar().unwrap() <= 0.0) {
                        return bad("pie fractions must be positive".into());
                    }
                    if (sum - 1.0).abs() > 1e-9 {
                        return bad(format!("pie fractions sum to {sum}"));
                    }
                    if self.style.pie.is_none() {
                        return bad("pie chart without pie style".into());
                    }
                } else if self.style.value_axis.is_none() {
                    return bad("bar chart without value axis".into());
                }
            }
            ChartType::Line | ChartType::Scatter => {
                for s in &self.series {
                    let pts = s.data.points();
                    if pts.is_empty() || pts.iter().flatten().any(|v| !v.is_finite()) {
                        return bad(format!("series {:?} needs finite points", s.label));
                    }
                    if self.chart_type == ChartType::Line && pts.len() < 2 {
                        return bad(format!("line {:?} needs two vertices", s.label));
                    }
                }
                if self.style.value_axis.is_none() || self.style.x_axis.is_none() {
                    return bad("line/scatter chart needs both axes".into());
                }
            }
        }
        if !self.style.uniform_color {
            for (i, a) in self.colors.iter().enumerate() {
                for b in &self.colors[..i] {
                    if a.channel_sum_distance(b) < 30 {
                        return bad(format!("colours {a:?} and {b:?} are too similar"));
                    }
                }
            }
        }
        Ok(())
    }

    /// The tabular data this spec encodes.
    pub fn table(&self) -> ChartTable {
        let mut t = ChartTable::new(self.chart_type);
        t.title = self.title.clone();
        t.caption = self.caption.clone();
        t.x_title = self.x_title.clone();
        t.y_title = self.y_title.clone();
        t.value_range = self.style.value_axis.as_ref().map(AxisSpec::range);
        t.x_range = self.style.x_axis.as_ref().map(AxisSpec::range);
        for s in &self.series {
            match &s.data {
                SeriesData::Scalar(v) => t.rows.push(TableRow {
                    label: s.label.clone(),
                    value: *v,
                    label_source: Provenance::GroundTruth,
                    value_source: Provenance::GroundTruth,
                    confidence: 1.0,
                }),
                SeriesData::Points(p) => t.series.push(Series {
                    label: s.label.clone(),
                    points: p.clone(),
                    label_source: Provenance::GroundTruth,
                    value_source: Provenance::GroundTruth,
                    confidence: 1.0,
                }),
            }
        }
        t
    }
}

fn type_tag(t: ChartType) -> u64 {
    match t {
        ChartType::Vbar => 0x5642_4152,
        ChartType::Hbar => 0x4842_4152,
        ChartType::Pie => 0x0050_4945,
        ChartType::Line => 0x4c49_4e45,
        ChartType::Scatter => 0x5343_4154,
    }
}

/// Draws a chart spec. Deterministic in `(seed, chart_type, config)`.
pub fn sample_spec(seed: u64, chart_type: ChartType, config: &SynthConfig) -> Result<ChartSpec> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(crate::splitmix64(seed) ^ type_tag(chart_type));
    let s = &mut Sampler { rng: &mut rng, cfg: config };
    let spec = match chart_type {
        ChartType::Vbar | ChartType::Hbar => s.bars(seed, chart_type),
        ChartType::Pie => s.pie(seed),
        ChartType::Line => s.line(seed),
        ChartType::Scatter => s.scatter(seed),
    };
    spec.validate()?;
    Ok(spec)
}

struct Sampler<'a> {
    rng: &'a mut ChaCha8Rng,
    cfg: &'a SynthConfig,
}

const NICE_STEPS: [f64; 17] =
    [0.5, 1.0, 2.0, 2.5, 5.0, 10.0, 20.0, 25.0, 50.0, 100.0, 200.0, 250.0, 500.0, 1000.0, 2000.0, 2500.0, 5000.0];

/// Fewest decimals that print `x` exactly (up to 4).
fn decimals_of(x: f64) -> u8 {
    (0..=4u8).find(|&d| {
        let s = x * 10f64.powi(d as i32);
        (s - s.round()).abs() < 1e-9
    })
    .unwrap_or(4)
}

fn round_to(v: f64, decimals: u8) -> f64 {
    let m = 10f64.powi(decimals as i32);
    (v * m).round() / m
}

fn round_sig(v: f64, digits: i32) -> f64 {
    let mag = v.abs().log10().floor() as i32;
    let m = 10f64.powi(digits - 1 - mag);
    (v * m).round() / m
}

impl Sampler<'_> {
    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn in_range(&mut self, r: [usize; 2]) -> usize {
        self.rng.gen_range(r[0]..=r[1])
    }

    fn pick<'w>(&mut self, from: &[&'w str], n: usize) -> Vec<String> {
        from.choose_multiple(self.rng, n).map(|s| s.to_string()).collect()
    }

    fn style_base(&mut self, chart_type: ChartType) -> Style {
        let background = if self.chance(0.7) {
            Color::new(self.rng.gen_range(228..=255), self.rng.gen_range(228..=255), self.rng.gen_range(228..=255))
        } else {
            Color::new(self.rng.gen_range(200..=255), self.rng.gen_range(200..=255), self.rng.gen_range(200..=255))
        };
        let text_color = Color::new(self.rng.gen_range(0..=40), self.rng.gen_range(0..=40), self.rng.gen_range(0..=40));
        let border = if self.chance(self.cfg.p_border) {
            Some(Border {
                color: Color::new(self.rng.gen_range(0..=160), self.rng.gen_range(0..=160), self.rng.gen_range(0..=160)),
                width: if self.chance(0.5) { 1.0 } else { 2.0 },
                dashed: self.chance(0.5),
            })
        } else {
            None
        };
        // Background texture only under bar charts: line colour clustering and
        // pie connector detection both assume a flat background.
        let background_texture = if chart_type.is_bar() && self.chance(self.cfg.p_background_texture) {
            Some(self.texture(0.25))
        } else {
            None
        };
        Style {
            background,
            text_color,
            border,
            background_texture,
            element_texture: None,
            uniform_color: false,
            legend: None,
            axes_hidden: false,
            label_rotation: 0.0,
            value_on_bar: false,
            bar_gap: 0.0,
            tick_format: TickFormat::Plain,
            value_decimals: 0,
            value_axis: None,
            x_axis: None,
            pie: None,
            dashed: Vec::new(),
        }
    }

    fn texture(&mut self, strength: f64) -> Texture {
        let pattern = match self.rng.gen_range(0..3) {
            0 => TextureKind::Stripes { period: self.rng.gen_range(4..=10) },
            1 => TextureKind::Checker { cell: self.rng.gen_range(2..=6) },
            _ => TextureKind::Noise { seed: self.rng.gen(), density: self.rng.gen_range(0.2..0.5) },
        };
        Texture { pattern, strength }
    }

    fn colors(&mut self, n: usize, style: &Style) -> Vec<Color> {
        let min_d = self.cfg.min_color_distance;
        let forbidden = [style.background, style.text_color, Color::WHITE, Color::BLACK];
        let mut out: Vec<Color> = Vec::with_capacity(n);
        let mut tries = 0;
        while out.len() < n && tries < 20_000 {
            tries += 1;
            let c = Color::new(self.rng.gen_range(0..=230), self.rng.gen_range(0..=230), self.rng.gen_range(0..=230));
            if forbidden.iter().chain(out.iter()).all(|f| f.distance(&c) >= min_d) {
                out.push(c);
            }
        }
        // Sequential packing can stall for large n; fall back to a fixed grid.
        if out.len() < n {
            out.clear();
            let levels = [20u8, 110, 200];
            let mut grid = Vec::new();
            for r in levels {
                for g in levels {
                    for b in levels {
                        let c = Color::new(r, g, b);
                        if forbidden.iter().all(|f| f.distance(&c) >= 60.0) {
                            grid.push(c);
                        }
                    }
                }
            }
            grid.shuffle(self.rng);
            out = grid.into_iter().take(n).collect();
        }
        out
    }

    fn titles(&mut self, with_axes: bool) -> [Option<String>; 4] {
        let title = self.chance(self.cfg.p_title).then(|| {
            let a = words::TITLE_A.choose(self.rng).unwrap();
            let b = words::TITLE_B.choose(self.rng).unwrap();
            if self.rng.gen_bool(0.4) {
                format!("{a} {b} {}", self.rng.gen_range(2015..=2024))
            } else {
                format!("{a} {b}")
            }
        });
        let caption = self.chance(self.cfg.p_caption).then(|| {
            let b = words::TITLE_B.choose(self.rng).unwrap().to_lowercase();
            format!("Figure {}: {b} by group", self.rng.gen_range(1..=9))
        });
        let (mut x_title, mut y_title) = (None, None);
        if with_axes && self.chance(self.cfg.p_axis_titles) {
            let t = self.pick(words::AXIS_TITLES, 2);
            x_title = Some(t[0].clone());
            y_title = Some(t[1].clone());
        }
        [title, caption, x_title, y_title]
    }

    /// Linear axis with nice ticks; returns the axis and the decimals data
    /// values are rounded to.
    fn linear_axis(&mut self, allow_bottom: bool) -> (AxisSpec, u8) {
        let step = *NICE_STEPS.choose(self.rng).unwrap();
        let n_ticks = self.rng.gen_range(4..=6);
        let bottom = if allow_bottom && self.chance(self.cfg.p_nonzero_bottom) {
            step * self.rng.gen_range(1..=3) as f64
        } else {
            0.0
        };
        let ticks: Vec<f64> = (0..=n_ticks).map(|i| round_to(bottom + step * i as f64, 4)).collect();
        let resolution = step / 10.0;
        let value_decimals = if resolution >= 1.0 { 0 } else { decimals_of(resolution) };
        let axis = AxisSpec {
            scale: AxisScale::Linear,
            min: bottom,
            max: *ticks.last().unwrap(),
            ticks,
            decimals: decimals_of(step),
        };
        (axis, value_decimals)
    }

    fn bars(&mut self, seed: u64, chart_type: ChartType) -> ChartSpec {
        let n = self.in_range(self.cfg.bar_count);
        let labels = self.pick(words::LABELS, n);
        let mut style = self.style_base(chart_type);
        style.axes_hidden = self.chance(self.cfg.p_hidden_axes);
        let exponent = !style.axes_hidden && self.chance(self.cfg.p_exponent_ticks);
        style.legend = self.chance(self.cfg.p_legend).then(|| {
            if self.rng.gen_bool(0.5) {
                LegendPosition::Right
            } else {
                LegendPosition::Bottom
            }
        });
        // A legend needs distinguishable, untextured swatches.
        if style.legend.is_none() {
            style.uniform_color = self.chance(self.cfg.p_uniform_color);
            if self.chance(self.cfg.p_element_texture) {
                style.element_texture = Some(self.texture(0.35));
            }
        }
        style.value_on_bar = style.axes_hidden || (!exponent && self.chance(self.cfg.p_value_on_bar));
        style.bar_gap = self.rng.gen_range(self.cfg.bar_gap[0]..=self.cfg.bar_gap[1]);
        if chart_type == ChartType::Vbar && style.legend.is_none() {
            let plot_w = self.cfg.canvas_size as f64 * 0.75;
            let widest = labels.iter().map(|l| crate::font::text_width(l, 10.0)).fold(0.0, f64::max);
            if widest + 6.0 > plot_w / n as f64 || self.chance(self.cfg.p_rotated_labels) {
                style.label_rotation = 45.0;
            }
        }
        let values: Vec<f64>;
        if exponent {
            let a = self.rng.gen_range(0..=2) as f64;
            let d = self.rng.gen_range(2..=4) as f64;
            style.tick_format = TickFormat::Exponent;
            style.value_axis = Some(AxisSpec {
                scale: AxisScale::Log10,
                min: 10f64.powf(a),
                max: 10f64.powf(a + d),
                ticks: (0..=d as i32).map(|k| 10f64.powf(a + k as f64)).collect(),
                decimals: 0,
            });
            values = (0..n).map(|_| round_sig(10f64.powf(a + d * self.rng.gen_range(0.15..0.92)), 3)).collect();
        } else {
            let (axis, vd) = self.linear_axis(true);
            style.tick_format = if axis.max >= 1000.0 && self.chance(self.cfg.p_thousands) {
                TickFormat::Thousands
            } else if self.chance(self.cfg.p_currency) {
                TickFormat::Currency
            } else {
                TickFormat::Plain
            };
            let hi = if chart_type == ChartType::Hbar && style.value_on_bar { 0.8 } else { 0.92 };
            let span = axis.max - axis.min;
            values = (0..n)
                .map(|_| {
                    let v = round_to(axis.min + span * self.rng.gen_range(0.15..hi), vd);
                    if v <= axis.min {
                        axis.min + 10f64.powi(-(vd as i32))
                    } else {
                        v
                    }
                })
                .collect();
            style.value_decimals = vd;
            style.value_axis = Some(axis);
        }
        let mut colors = self.colors(n, &style);
        if style.uniform_color {
            colors = vec![colors[0]; n];
        }
        let [title, caption, x_title, y_title] = self.titles(true);
        ChartSpec {
            seed,
            chart_type,
            canvas: [self.cfg.canvas_size; 2],
            series: labels
                .into_iter()
                .zip(values)
                .map(|(label, v)| SeriesSpec { label, data: SeriesData::Scalar(v) })
                .collect(),
            colors,
            style,
            title,
            caption,
            x_title,
            y_title,
        }
    }

    fn pie(&mut self, seed: u64) -> ChartSpec {
        let n = self.in_range(self.cfg.pie_slices);
        let labels = self.pick(words::LABELS, n);
        let mut fractions = vec![1.0 / n as f64; n];
        for _ in 0..1000 {
            let w: Vec<f64> = (0..n).map(|_| self.rng.gen_range(1.0..4.0)).collect();
            let total: f64 = w.iter().sum();
            let f: Vec<f64> = w.iter().map(|v| v / total).collect();
            if f.iter().all(|&v| v >= self.cfg.min_pie_fraction) {
                fractions = f;
                break;
            }
        }
        let mut style = self.style_base(ChartType::Pie);
        let weights = self.cfg.pie_label_weights;
        let total: f64 = weights.iter().sum();
        let mut pick = self.rng.gen_range(0.0..total);
        let mut label_mode = PieLabelMode::Adjacent;
        for (mode, w) in [PieLabelMode::Legend, PieLabelMode::Connector, PieLabelMode::Adjacent].into_iter().zip(weights) {
            if pick < w {
                label_mode = mode;
                break;
            }
            pick -= w;
        }
        if label_mode == PieLabelMode::Legend {
            style.legend = Some(LegendPosition::Right);
        } else {
            style.uniform_color = self.chance(self.cfg.p_uniform_color);
            if self.chance(self.cfg.p_element_texture) {
                style.element_texture = Some(self.texture(0.35));
            }
        }
        let radius = if label_mode == PieLabelMode::Legend {
            self.rng.gen_range(110.0..150.0)
        } else {
            self.rng.gen_range(85.0..125.0)
        };
        style.pie = Some(PieStyle {
            label_mode,
            start_angle: self.rng.gen_range(0.0..360.0),
            radius,
            separators: style.uniform_color || self.chance(self.cfg.p_separators),
        });
        let mut colors = self.colors(n, &style);
        if style.uniform_color {
            colors = vec![colors[0]; n];
        }
        let [title, caption, _, _] = self.titles(false);
        ChartSpec {
            seed,
            chart_type: ChartType::Pie,
            canvas: [self.cfg.canvas_size; 2],
            series: labels
                .into_iter()
                .zip(fractions)
                .map(|(label, v)| SeriesSpec { label, data: SeriesData::Scalar(v) })
                .collect(),
            colors,
            style,
            title,
            caption,
            x_title: None,
            y_title: None,
        }
    }

    fn line(&mut self, seed: u64) -> ChartSpec {
        let n = self.in_range(self.cfg.line_series);
        let m = self.in_range(self.cfg.line_points);
        let labels = self.pick(words::SERIES, n);
        let mut style = self.style_base(ChartType::Line);
        let (x_axis, xd) = self.linear_axis(false);
        let (y_axis, yd) = self.linear_axis(true);
        let (x_lo, x_hi) = (x_axis.min + 0.06 * (x_axis.max - x_axis.min), x_axis.max - 0.06 * (x_axis.max - x_axis.min));
        let spacing = (x_hi - x_lo) / (m - 1) as f64;
        let mut xs: Vec<f64> = (0..m)
            .map(|i| {
                let jitter = if i == 0 || i == m - 1 { 0.0 } else { self.rng.gen_range(-0.2..0.2) * spacing };
                round_to(x_lo + i as f64 * spacing + jitter, xd)
            })
            .collect();
        xs.dedup();
        let y_span = y_axis.max - y_axis.min;
        let (y_lo, y_hi) = (y_axis.min + 0.08 * y_span, y_axis.max - 0.08 * y_span);
        let mut all: Vec<Vec<[f64; 2]>> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut pts = Vec::with_capacity(xs.len());
            let mut y = self.rng.gen_range(y_lo..y_hi);
            for (i, &x) in xs.iter().enumerate() {
                let mut candidate = y;
                for attempt in 0..50 {
                    candidate = if i == 0 && attempt == 0 {
                        y
                    } else {
                        (y + self.rng.gen_range(-0.3..0.3) * y_span).clamp(y_lo, y_hi)
                    };
                    candidate = round_to(candidate, yd);
                    // keep knees of different series apart
                    if all.iter().all(|s: &Vec<[f64; 2]>| (s[i][1] - candidate).abs() >= 0.08 * y_span) {
                        break;
                    }
                }
                y = candidate;
                pts.push([x, y]);
            }
            all.push(pts);
        }
        style.legend = (n > 1 || self.chance(self.cfg.p_legend)).then_some(LegendPosition::Right);
        style.dashed = (0..n).map(|_| self.chance(self.cfg.p_dashed)).collect();
        style.value_decimals = yd;
        style.value_axis = Some(y_axis);
        style.x_axis = Some(x_axis);
        let colors = self.colors(n, &style);
        let [title, caption, x_title, y_title] = self.titles(true);
        ChartSpec {
            seed,
            chart_type: ChartType::Line,
            canvas: [self.cfg.canvas_size; 2],
            series: labels
                .into_iter()
                .zip(all)
                .map(|(label, p)| SeriesSpec { label, data: SeriesData::Points(p) })
                .collect(),
            colors,
            style,
            title,
            caption,
            x_title,
            y_title,
        }
    }

    fn scatter(&mut self, seed: u64) -> ChartSpec {
        let n = self.in_range(self.cfg.scatter_series);
        let labels = self.pick(words::SERIES, n);
        let mut style = self.style_base(ChartType::Scatter);
        let (x_axis, xd) = self.linear_axis(false);
        let (y_axis, yd) = self.linear_axis(true);
        let mut placed: Vec<[f64; 2]> = Vec::new();
        let mut all = Vec::with_capacity(n);
        for _ in 0..n {
            let m = self.in_range(self.cfg.scatter_points);
            let mut pts = Vec::with_capacity(m);
            for _ in 0..m {
                for _ in 0..200 {
                    let u = [self.rng.gen_range(0.05..0.95), self.rng.gen_range(0.05..0.95)];
                    let x = round_to(x_axis.min + u[0] * (x_axis.max - x_axis.min), xd);
                    let y = round_to(y_axis.min + u[1] * (y_axis.max - y_axis.min), yd);
                    let un = [x_axis.fraction(x), y_axis.fraction(y)];
                    if placed.iter().all(|q| (q[0] - un[0]).abs().max((q[1] - un[1]).abs()) >= 0.08) {
                        placed.push(un);
                        pts.push([x, y]);
                        break;
                    }
                }
            }
            if pts.is_empty() {
                pts.push([x_axis.min + 0.5 * (x_axis.max - x_axis.min), y_axis.min]);
            }
            all.push(pts);
        }
        style.legend = (n > 1 || self.chance(self.cfg.p_legend)).then_some(LegendPosition::Right);
        style.value_decimals = yd;
        style.value_axis = Some(y_axis);
        style.x_axis = Some(x_axis);
        let colors = self.colors(n, &style);
        let [title, caption, x_title, y_title] = self.titles(true);
        ChartSpec {
            seed,
            chart_type: ChartType::Scatter,
            canvas: [self.cfg.canvas_size; 2],
            series: labels
                .into_iter()
                .zip(all)
                .map(|(label, p)| SeriesSpec { label, data: SeriesData::Points(p) })
                .collect(),
            colors,
            style,
            title,
            caption,
            x_title,
            y_title,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_for_fixed_seed() {
        let cfg = SynthConfig::default();
        for t in ChartType::ALL {
            let a = serde_json::to_string(&sample_spec(0, t, &cfg).unwrap()).unwrap();
            let b = serde_json::to_string(&sample_spec(0, t, &cfg).unwrap()).unwrap();
            assert_eq!(a, b);
        }
        let a = sample_spec(1, ChartType::Pie, &cfg).unwrap();
        let b = sample_spec(2, ChartType::Pie, &cfg).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn forced_three_slices_sum_to_one() {
        let cfg = SynthConfig { pie_slices: [3, 3], ..Default::default() };
        for seed in 0..50 {
            let spec = sample_spec(seed, ChartType::Pie, &cfg).unwrap();
            assert_eq!(spec.series.len(), 3);
            let sum: f64 = spec.series.iter().map(|s| s.data.scalar().unwrap()).sum();
            assert!((sum - 1.0).abs() <= 1e-9);
            assert!(spec.series.iter().all(|s| s.data.scalar().unwrap() >= cfg.min_pie_fraction));
        }
    }

    #[test]
    fn hidden_axes_frequency_matches_probability() {
        let cfg = SynthConfig { p_hidden_axes: 0.3, ..Default::default() };
        let hidden =
            (0..10_000u64).filter(|&s| sample_spec(s, ChartType::Vbar, &cfg).unwrap().style.axes_hidden).count();
        let freq = hidden as f64 / 10_000.0;
        assert!((freq - 0.3).abs() <= 0.02, "hidden-axes frequency {freq}");
    }

    #[test]
    fn hidden_axes_force_value_labels() {
        let cfg = SynthConfig { p_hidden_axes: 1.0, ..Default::default() };
        for seed in 0..20 {
            let s = sample_spec(seed, ChartType::Vbar, &cfg).unwrap();
            assert!(s.style.value_on_bar && s.style.tick_format != TickFormat::Exponent);
        }
    }

    #[test]
    fn colours_are_distinct() {
        let cfg = SynthConfig { bar_count: [12, 12], p_uniform_color: 0.0, ..Default::default() };
        for seed in 0..30 {
            let s = sample_spec(seed, ChartType::Vbar, &cfg).unwrap();
            for (i, a) in s.colors.iter().enumerate() {
                for b in &s.colors[..i] {
                    assert!(a.distance(b) >= 60.0, "seed {seed}: {a:?} vs {b:?}");
                }
            }
        }
    }

    #[test]
    fn tick_formats() {
        assert_eq!(TickFormat::Plain.format(2.5, 1), ("2.5".into(), None));
        assert_eq!(TickFormat::Thousands.format(1234567.0, 0), ("1,234,567".into(), None));
        assert_eq!(TickFormat::Thousands.format(999.0, 0), ("999".into(), None));
        assert_eq!(TickFormat::Currency.format(20.0, 0), ("$20".into(), None));
        assert_eq!(TickFormat::Exponent.format(1000.0, 0), ("10".into(), Some("3".into())));
    }

    #[test]
    fn invalid_config_is_an_error() {
        let cfg = SynthConfig { bar_count: [0, 3], ..Default::default() };
        assert!(matches!(sample_spec(0, ChartType::Vbar, &cfg), Err(SynthError::InvalidConfig(_))));
    }
}
