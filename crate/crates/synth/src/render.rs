//! Rasterizes a [`ChartSpec`] and records its ground truth.

use charter_core::{AxisScale, ChartType, Color, Orientation, Raster};

use crate::canvas;
use crate::font::{polygon_bbox, polygons_overlap, text_width, HAlign, TextPlacement, VAlign};
use crate::spec::{AxisSpec, ChartSpec, LegendPosition, PieLabelMode, TickFormat};
use crate::truth::{
    polar, sector_bbox, AxisGt, BarGt, GroundTruth, LegendEntryGt, LegendGt, LineGt, PieGt, ScatterGt, SectorGt,
    TextGt, TextRole, TickGt, GT_SCHEMA_VERSION,
};
use crate::{Result, SynthError};

const TEXT_SIZE: f64 = 10.0;
const TITLE_SIZE: f64 = 14.0;
const AXIS_TITLE_SIZE: f64 = 11.0;
const MANTISSA_SIZE: f64 = 12.0;
const EXPONENT_SIZE: f64 = 7.0;
/// Distance the exponent box top sits above the mantissa top.
const EXPONENT_RAISE: f64 = 3.0;
const LEGEND_ROW: f64 = 18.0;
const SWATCH: f64 = 12.0;
const DOT_RADIUS: f64 = 4.0;
const LINE_WIDTH: f64 = 2.0;
const DASH: (f64, f64) = (10.0, 6.0);
const MIN_PLOT: [f64; 2] = [150.0, 120.0];

/// Renders `spec` onto a fresh raster.
///
/// Fails with [`SynthError::LayoutOverflow`] when text would leave the
/// canvas or collide, or the plot area gets too small.
pub fn render(spec: &ChartSpec) -> Result<(Raster, GroundTruth)> {
    spec.validate()?;
    let [w, h] = spec.canvas;
    let mut raster = Raster::new(w, h, spec.style.background)?;
    if let Some(t) = &spec.style.background_texture {
        canvas::fill_rect(&mut raster, [0.0, 0.0, (w - 1) as f64, (h - 1) as f64], spec.style.background, Some(t));
    }
    let mut r = Renderer {
        spec,
        raster,
        texts: Vec::new(),
        frame: [14.0, 14.0, w as f64 - 15.0, h as f64 - 15.0],
        gt: GroundTruth {
            schema_version: GT_SCHEMA_VERSION,
            chart_type: spec.chart_type,
            raster_size: spec.canvas,
            table: spec.table(),
            background: spec.style.background,
            text_color: spec.style.text_color,
            chart_region: [0.0; 4],
            plot_area: None,
            bars: Vec::new(),
            pies: Vec::new(),
            lines: Vec::new(),
            scatter: Vec::new(),
            axes: Vec::new(),
            texts: Vec::new(),
            legend: None,
            connectors: Vec::new(),
        },
    };
    r.run()?;
    Ok((r.raster, r.gt))
}

struct Renderer<'a> {
    spec: &'a ChartSpec,
    raster: Raster,
    texts: Vec<TextGt>,
    /// Space left for the chart body: `[left, top, right, bottom]`.
    frame: [f64; 4],
    gt: GroundTruth,
}

fn text_gt(role: TextRole, p: &TextPlacement) -> TextGt {
    TextGt {
        role,
        text: p.text.clone(),
        polygon: p.polygon(),
        angle: p.angle,
        size: p.size,
        superscript: None,
        superscript_polygon: None,
    }
}

fn overflow(msg: impl Into<String>) -> SynthError {
    SynthError::LayoutOverflow(msg.into())
}

/// Width of a tick label as printed.
fn tick_label_width(format: TickFormat, value: f64, decimals: u8) -> f64 {
    match format.format(value, decimals) {
        (m, Some(sup)) => text_width(&m, MANTISSA_SIZE) + 1.0 + text_width(&sup, EXPONENT_SIZE),
        (m, None) => text_width(&m, TEXT_SIZE),
    }
}

impl Renderer<'_> {
    fn run(&mut self) -> Result<()> {
        let spec = self.spec;
        let [w, h] = [spec.canvas[0] as f64, spec.canvas[1] as f64];
        if let Some(b) = &spec.style.border {
            let dash = b.dashed.then_some((8.0, 4.0));
            canvas::rect_outline(&mut self.raster, [3.0, 3.0, w - 4.0, h - 4.0], b.width, b.color, dash);
        }
        if let Some(title) = &spec.title {
            let p = TextPlacement::anchored(title, TITLE_SIZE, [w / 2.0, 12.0], HAlign::Center, VAlign::Top, 0.0);
            self.texts.push(text_gt(TextRole::Title, &p));
            self.frame[1] = 12.0 + TITLE_SIZE + 8.0;
        }
        if let Some(caption) = &spec.caption {
            let p =
                TextPlacement::anchored(caption, TEXT_SIZE, [w / 2.0, h - 12.0], HAlign::Center, VAlign::Bottom, 0.0);
            self.texts.push(text_gt(TextRole::Caption, &p));
            self.frame[3] = h - 12.0 - TEXT_SIZE - 8.0;
        }
        let legend = self.layout_legend();
        match spec.chart_type {
            ChartType::Vbar => self.vbar()?,
            ChartType::Hbar => self.hbar()?,
            ChartType::Pie => self.pie()?,
            ChartType::Line | ChartType::Scatter => self.xy()?,
        }
        if let Some(l) = legend {
            self.draw_legend(l);
        }
        self.check_texts()?;
        let ink = spec.style.text_color;
        for t in &self.texts {
            let p = TextPlacement { text: t.text.clone(), size: t.size, angle: t.angle, origin: t.polygon[0] };
            p.draw(&mut self.raster, ink);
            if let (Some(s), Some(poly)) = (&t.superscript, &t.superscript_polygon) {
                TextPlacement { text: s.clone(), size: EXPONENT_SIZE, angle: 0.0, origin: poly[0] }
                    .draw(&mut self.raster, ink);
            }
        }
        self.gt.texts = std::mem::take(&mut self.texts);
        Ok(())
    }

    /// Reserves legend space and returns the entry layout.
    fn layout_legend(&mut self) -> Option<LegendGt> {
        let spec = self.spec;
        let pos = spec.style.legend?;
        let [left, top, right, bottom] = self.frame;
        let widths: Vec<f64> = spec.series.iter().map(|s| text_width(&s.label, TEXT_SIZE)).collect();
        let mut entries = Vec::with_capacity(widths.len());
        let bbox;
        match pos {
            LegendPosition::Right => {
                let lw = 24.0 + widths.iter().fold(0.0f64, |a, &b| a.max(b)) + 8.0;
                let lh = 6.0 + LEGEND_ROW * widths.len() as f64;
                let x0 = (right - lw).round();
                let y0 = ((top + bottom - lh) / 2.0).round();
                bbox = [x0, y0, x0 + lw, y0 + lh];
                for (i, s) in spec.series.iter().enumerate() {
                    let y = y0 + 6.0 + LEGEND_ROW * i as f64;
                    entries.push((s.label.clone(), spec.colors[i], [x0 + 6.0, y]));
                }
                self.frame[2] = x0 - 12.0;
            }
            LegendPosition::Bottom => {
                let avail = right - left - 12.0;
                let mut rows: Vec<Vec<usize>> = vec![Vec::new()];
                let mut used = 0.0;
                for (i, tw) in widths.iter().enumerate() {
                    let ew = 24.0 + tw + 10.0;
                    if used + ew > avail && !rows.last().unwrap().is_empty() {
                        rows.push(Vec::new());
                        used = 0.0;
                    }
                    rows.last_mut().unwrap().push(i);
                    used += ew;
                }
                let row_w = |r: &Vec<usize>| r.iter().map(|&i| 24.0 + widths[i] + 10.0).sum::<f64>();
                let lw = rows.iter().map(row_w).fold(0.0, f64::max) + 2.0;
                let lh = 6.0 + LEGEND_ROW * rows.len() as f64;
                let x0 = ((left + right - lw) / 2.0).round();
                let y0 = (bottom - lh).round();
                bbox = [x0, y0, x0 + lw, y0 + lh];
                for (ri, row) in rows.iter().enumerate() {
                    let mut x = x0 + 6.0;
                    for &i in row {
                        let y = y0 + 6.0 + LEGEND_ROW * ri as f64;
                        entries.push((spec.series[i].label.clone(), spec.colors[i], [x, y]));
                        x += 24.0 + widths[i] + 10.0;
                    }
                }
                self.frame[3] = y0 - 10.0;
            }
        }
        let mut out = LegendGt { bbox, entries: Vec::new() };
        for (label, color, [x, y]) in entries {
            let p = TextPlacement::anchored(&label, TEXT_SIZE, [x + 18.0, y + SWATCH / 2.0], HAlign::Left, VAlign::Middle, 0.0);
            self.texts.push(text_gt(TextRole::LegendEntry, &p));
            out.entries.push(LegendEntryGt { label, color, swatch: [x, y, x + SWATCH - 1.0, y + SWATCH - 1.0] });
        }
        Some(out)
    }

    fn draw_legend(&mut self, legend: LegendGt) {
        let b = legend.bbox;
        canvas::fill_rect(&mut self.raster, b, Color::WHITE, None);
        canvas::rect_outline(&mut self.raster, b, 1.0, self.spec.style.text_color, None);
        for e in &legend.entries {
            canvas::fill_rect(&mut self.raster, e.swatch, e.color, None);
        }
        self.gt.legend = Some(legend);
    }

    /// Left edge after an optional rotated y-axis title.
    fn place_y_title(&mut self, plot_mid_y: f64) -> f64 {
        let left = self.frame[0];
        if let Some(t) = &self.spec.y_title {
            let p = TextPlacement::anchored(
                t,
                AXIS_TITLE_SIZE,
                [left + AXIS_TITLE_SIZE / 2.0, plot_mid_y],
                HAlign::Center,
                VAlign::Middle,
                90.0,
            );
            self.texts.push(text_gt(TextRole::YTitle, &p));
            left + AXIS_TITLE_SIZE + 6.0
        } else {
            left
        }
    }

    /// Bottom edge after an optional x-axis title.
    fn place_x_title(&mut self, plot_mid_x: f64) -> f64 {
        let bottom = self.frame[3];
        if let Some(t) = &self.spec.x_title {
            let p = TextPlacement::anchored(t, AXIS_TITLE_SIZE, [plot_mid_x, bottom], HAlign::Center, VAlign::Bottom, 0.0);
            self.texts.push(text_gt(TextRole::XTitle, &p));
            bottom - AXIS_TITLE_SIZE - 6.0
        } else {
            bottom
        }
    }

    fn check_plot(&self, plot: [f64; 4]) -> Result<()> {
        if plot[2] - plot[0] < MIN_PLOT[0] || plot[3] - plot[1] < MIN_PLOT[1] {
            return Err(overflow(format!("plot area {:.0}x{:.0} too small", plot[2] - plot[0], plot[3] - plot[1])));
        }
        Ok(())
    }

    fn axis_line(&mut self, from: [f64; 2], to: [f64; 2]) {
        canvas::segment(&mut self.raster, from, to, 1.0, self.spec.style.text_color, None, 0.0);
    }

    /// Ticks of a vertical value axis whose line sits at `x_line`.
    fn y_ticks(&mut self, axis: &AxisSpec, gt: &mut AxisGt, x_line: f64, hidden: bool) {
        let format = self.spec.style.tick_format;
        for &v in &axis.ticks {
            let y = gt.pixel_at(v);
            let (text, sup) = format.format(v, axis.decimals);
            gt.ticks.push(TickGt { value: v, position: [x_line, y], text: text.clone(), superscript: sup.clone() });
            if hidden {
                continue;
            }
            self.axis_line([x_line - 4.0, y], [x_line, y]);
            let right = x_line - 7.0;
            match sup {
                Some(s) => {
                    let ws = text_width(&s, EXPONENT_SIZE);
                    let m = TextPlacement::anchored(&text, MANTISSA_SIZE, [right - ws - 1.0, y], HAlign::Right, VAlign::Middle, 0.0);
                    self.push_exponent(TextRole::YTick, m, s);
                }
                None => {
                    let p = TextPlacement::anchored(&text, TEXT_SIZE, [right, y], HAlign::Right, VAlign::Middle, 0.0);
                    self.texts.push(text_gt(TextRole::YTick, &p));
                }
            }
        }
    }

    /// Ticks of a horizontal value axis whose line sits at `y_line`.
    fn x_ticks(&mut self, axis: &AxisSpec, gt: &mut AxisGt, y_line: f64, hidden: bool) {
        let format = self.spec.style.tick_format;
        for &v in &axis.ticks {
            let x = gt.pixel_at(v);
            let (text, sup) = format.format(v, axis.decimals);
            gt.ticks.push(TickGt { value: v, position: [x, y_line], text: text.clone(), superscript: sup.clone() });
            if hidden {
                continue;
            }
            self.axis_line([x, y_line], [x, y_line + 4.0]);
            match sup {
                Some(s) => {
                    let group = text_width(&text, MANTISSA_SIZE) + 1.0 + text_width(&s, EXPONENT_SIZE);
                    let m = TextPlacement::anchored(
                        &text,
                        MANTISSA_SIZE,
                        [x - group / 2.0, y_line + 7.0 + EXPONENT_RAISE],
                        HAlign::Left,
                        VAlign::Top,
                        0.0,
                    );
                    self.push_exponent(TextRole::XTick, m, s);
                }
                None => {
                    let p = TextPlacement::anchored(&text, TEXT_SIZE, [x, y_line + 7.0], HAlign::Center, VAlign::Top, 0.0);
                    self.texts.push(text_gt(TextRole::XTick, &p));
                }
            }
        }
    }

    fn push_exponent(&mut self, role: TextRole, mantissa: TextPlacement, sup: String) {
        let [_, mt, mr, _] = mantissa.bbox();
        let s = TextPlacement::anchored(&sup, EXPONENT_SIZE, [mr + 1.0, mt - EXPONENT_RAISE], HAlign::Left, VAlign::Top, 0.0);
        let mut t = text_gt(role, &mantissa);
        t.superscript = Some(sup);
        t.superscript_polygon = Some(s.polygon());
        self.texts.push(t);
    }

    fn tick_labels_width(&self, axis: &AxisSpec) -> f64 {
        axis.ticks
            .iter()
            .map(|&v| tick_label_width(self.spec.style.tick_format, v, axis.decimals))
            .fold(0.0, f64::max)
    }

    fn tick_labels_height(&self) -> f64 {
        if self.spec.style.tick_format == TickFormat::Exponent {
            MANTISSA_SIZE + EXPONENT_RAISE
        } else {
            TEXT_SIZE
        }
    }

    fn vbar(&mut self) -> Result<()> {
        let spec = self.spec;
        let style = &spec.style;
        let axis = style.value_axis.clone().expect("validated");
        let n = spec.series.len();
        let hidden = style.axes_hidden;
        let [_, top, right, _] = self.frame;
        let mid_y = (self.frame[1] + self.frame[3]) / 2.0;
        let left = self.place_y_title(mid_y);
        let plot_left = if hidden { left + 4.0 } else { (left + self.tick_labels_width(&axis) + 8.0).ceil() };
        let plot_right = (right - 4.0).floor();
        let bottom = self.place_x_title((plot_left + plot_right) / 2.0);
        let widest = spec.series.iter().map(|s| text_width(&s.label, TEXT_SIZE)).fold(0.0, f64::max);
        let label_h = if style.label_rotation != 0.0 {
            6.0 + (widest + TEXT_SIZE) * std::f64::consts::FRAC_1_SQRT_2
        } else {
            6.0 + TEXT_SIZE
        };
        let plot = [plot_left, (top + 12.0).ceil(), plot_right, (bottom - label_h - 1.0).floor()];
        self.check_plot(plot)?;
        let mut gt = AxisGt {
            orientation: Orientation::Y,
            scale: axis.scale,
            hidden,
            pixel_range: [plot[3], plot[1]],
            value_range: axis.range(),
            ticks: Vec::new(),
        };
        let slot = (plot[2] - plot[0]) / n as f64;
        let half = slot * (1.0 - style.bar_gap) / 2.0;
        for (i, s) in spec.series.iter().enumerate() {
            let v = s.data.scalar().unwrap();
            let cx = plot[0] + slot * (i as f64 + 0.5);
            let y_top = gt.pixel_at(v);
            let bbox = [cx - half, y_top, cx + half, plot[3]];
            canvas::fill_rect(&mut self.raster, bbox, spec.colors[i], style.element_texture.as_ref());
            self.gt.bars.push(BarGt {
                label: s.label.clone(),
                value: v,
                bbox,
                color: spec.colors[i],
                textured: style.element_texture.is_some(),
            });
            let p = if style.label_rotation != 0.0 {
                TextPlacement::anchored(&s.label, TEXT_SIZE, [cx + 2.0, plot[3] + 6.0], HAlign::Right, VAlign::Top, style.label_rotation)
            } else {
                TextPlacement::anchored(&s.label, TEXT_SIZE, [cx, plot[3] + 6.0], HAlign::Center, VAlign::Top, 0.0)
            };
            self.texts.push(text_gt(TextRole::CategoryLabel, &p));
            if style.value_on_bar {
                let text = format!("{v:.*}", style.value_decimals as usize);
                let size = if text_width(&text, TEXT_SIZE) <= slot - 2.0 { TEXT_SIZE } else { 8.0 };
                let p = TextPlacement::anchored(&text, size, [cx, y_top - 3.0], HAlign::Center, VAlign::Bottom, 0.0);
                self.texts.push(text_gt(TextRole::ValueLabel, &p));
            }
        }
        if !hidden {
            self.axis_line([plot[0] - 1.0, plot[1]], [plot[0] - 1.0, plot[3] + 1.0]);
            self.axis_line([plot[0] - 1.0, plot[3] + 1.0], [plot[2], plot[3] + 1.0]);
        }
        self.y_ticks(&axis, &mut gt, plot[0] - 1.0, hidden);
        self.gt.axes.push(gt);
        self.gt.plot_area = Some(plot);
        self.gt.chart_region = plot;
        Ok(())
    }

    fn hbar(&mut self) -> Result<()> {
        let spec = self.spec;
        let style = &spec.style;
        let axis = style.value_axis.clone().expect("validated");
        let n = spec.series.len();
        let hidden = style.axes_hidden;
        let [_, top, right, _] = self.frame;
        let mid_y = (self.frame[1] + self.frame[3]) / 2.0;
        let left = self.place_y_title(mid_y);
        let widest = spec.series.iter().map(|s| text_width(&s.label, TEXT_SIZE)).fold(0.0, f64::max);
        let plot_left = (left + widest + 8.0).ceil();
        let last_w = axis.ticks.last().map_or(0.0, |&v| tick_label_width(style.tick_format, v, axis.decimals));
        let plot_right = if hidden { right - 4.0 } else { (right - 4.0 - last_w / 2.0).floor() };
        let bottom = self.place_x_title((plot_left + plot_right) / 2.0);
        let ticks_h = if hidden { 0.0 } else { 7.0 + self.tick_labels_height() + 2.0 };
        let plot = [plot_left, (top + 4.0).ceil(), plot_right, (bottom - ticks_h - 1.0).floor()];
        self.check_plot(plot)?;
        let mut gt = AxisGt {
            orientation: Orientation::X,
            scale: axis.scale,
            hidden,
            pixel_range: [plot[0], plot[2]],
            value_range: axis.range(),
            ticks: Vec::new(),
        };
        let slot = (plot[3] - plot[1]) / n as f64;
        let half = slot * (1.0 - style.bar_gap) / 2.0;
        for (i, s) in spec.series.iter().enumerate() {
            let v = s.data.scalar().unwrap();
            let cy = plot[1] + slot * (i as f64 + 0.5);
            let x_end = gt.pixel_at(v);
            let bbox = [plot[0], cy - half, x_end, cy + half];
            canvas::fill_rect(&mut self.raster, bbox, spec.colors[i], style.element_texture.as_ref());
            self.gt.bars.push(BarGt {
                label: s.label.clone(),
                value: v,
                bbox,
                color: spec.colors[i],
                textured: style.element_texture.is_some(),
            });
            let p = TextPlacement::anchored(&s.label, TEXT_SIZE, [plot[0] - 8.0, cy], HAlign::Right, VAlign::Middle, 0.0);
            self.texts.push(text_gt(TextRole::CategoryLabel, &p));
            if style.value_on_bar {
                let text = format!("{v:.*}", style.value_decimals as usize);
                let size = if slot >= TEXT_SIZE + 2.0 { TEXT_SIZE } else { 8.0 };
                let p = TextPlacement::anchored(&text, size, [x_end + 4.0, cy], HAlign::Left, VAlign::Middle, 0.0);
                self.texts.push(text_gt(TextRole::ValueLabel, &p));
            }
        }
        if !hidden {
            self.axis_line([plot[0] - 1.0, plot[1]], [plot[0] - 1.0, plot[3] + 1.0]);
            self.axis_line([plot[0] - 1.0, plot[3] + 1.0], [plot[2], plot[3] + 1.0]);
        }
        self.x_ticks(&axis, &mut gt, plot[3] + 1.0, hidden);
        self.gt.axes.push(gt);
        self.gt.plot_area = Some(plot);
        self.gt.chart_region = plot;
        Ok(())
    }

    fn xy(&mut self) -> Result<()> {
        let spec = self.spec;
        let style = &spec.style;
        let x_axis = style.x_axis.clone().expect("validated");
        let y_axis = style.value_axis.clone().expect("validated");
        let [_, top, right, _] = self.frame;
        let mid_y = (self.frame[1] + self.frame[3]) / 2.0;
        let left = self.place_y_title(mid_y);
        let plot_left = (left + self.tick_labels_width(&y_axis) + 8.0).ceil();
        let last_w = x_axis.ticks.last().map_or(0.0, |&v| tick_label_width(style.tick_format, v, x_axis.decimals));
        let plot_right = (right - 4.0 - last_w / 2.0).floor();
        let bottom = self.place_x_title((plot_left + plot_right) / 2.0);
        let plot = [plot_left, (top + 8.0).ceil(), plot_right, (bottom - 7.0 - self.tick_labels_height() - 3.0).floor()];
        self.check_plot(plot)?;
        let mut gx = AxisGt {
            orientation: Orientation::X,
            scale: AxisScale::Linear,
            hidden: false,
            pixel_range: [plot[0], plot[2]],
            value_range: x_axis.range(),
            ticks: Vec::new(),
        };
        let mut gy = AxisGt {
            orientation: Orientation::Y,
            scale: AxisScale::Linear,
            hidden: false,
            pixel_range: [plot[3], plot[1]],
            value_range: y_axis.range(),
            ticks: Vec::new(),
        };
        self.axis_line([plot[0] - 1.0, plot[1]], [plot[0] - 1.0, plot[3] + 1.0]);
        self.axis_line([plot[0] - 1.0, plot[3] + 1.0], [plot[2], plot[3] + 1.0]);
        self.x_ticks(&x_axis, &mut gx, plot[3] + 1.0, false);
        self.y_ticks(&y_axis, &mut gy, plot[0] - 1.0, false);
        for (i, s) in spec.series.iter().enumerate() {
            let values = s.data.points().to_vec();
            let px: Vec<[f64; 2]> = values.iter().map(|p| [gx.pixel_at(p[0]), gy.pixel_at(p[1])]).collect();
            if spec.chart_type == ChartType::Line {
                let dashed = style.dashed.get(i).copied().unwrap_or(false);
                canvas::polyline(&mut self.raster, &px, LINE_WIDTH, spec.colors[i], dashed.then_some(DASH));
                self.gt.lines.push(LineGt { label: s.label.clone(), color: spec.colors[i], dashed, vertices: px, values });
            } else {
                for p in &px {
                    canvas::fill_circle(&mut self.raster, *p, DOT_RADIUS, spec.colors[i]);
                }
                self.gt.scatter.push(ScatterGt {
                    label: s.label.clone(),
                    color: spec.colors[i],
                    dot_radius: DOT_RADIUS,
                    dots: px,
                    values,
                });
            }
        }
        self.gt.axes.push(gx);
        self.gt.axes.push(gy);
        self.gt.plot_area = Some(plot);
        self.gt.chart_region = plot;
        Ok(())
    }

    fn pie(&mut self) -> Result<()> {
        let spec = self.spec;
        let style = &spec.style;
        let pie = style.pie.expect("validated");
        let [left, top, right, bottom] = self.frame;
        let center = [((left + right) / 2.0).round(), ((top + bottom) / 2.0).round()];
        let r = pie.radius;
        if center[0] - r < left || center[0] + r > right || center[1] - r < top || center[1] + r > bottom {
            return Err(overflow(format!("pie radius {r:.0} does not fit")));
        }
        let mut sectors = Vec::with_capacity(spec.series.len());
        let mut start = pie.start_angle.rem_euclid(360.0);
        for (i, s) in spec.series.iter().enumerate() {
            let f = s.data.scalar().unwrap();
            let end = start + 360.0 * f;
            sectors.push(SectorGt {
                label: s.label.clone(),
                fraction: f,
                start_deg: start,
                end_deg: end,
                color: spec.colors[i],
                textured: style.element_texture.is_some(),
                bbox: sector_bbox(center, r, start, end),
            });
            start = end.rem_euclid(360.0);
        }
        let first = sectors[0].start_deg;
        let cum: Vec<f64> = sectors
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s.span();
                Some(*acc)
            })
            .collect();
        for y in (center[1] - r).floor() as i64..=(center[1] + r).ceil() as i64 {
            for x in (center[0] - r).floor() as i64..=(center[0] + r).ceil() as i64 {
                let (dx, dy) = (x as f64 - center[0], y as f64 - center[1]);
                if dx.hypot(dy) > r {
                    continue;
                }
                let a = (-dy).atan2(dx).to_degrees();
                let rel = (a - first).rem_euclid(360.0);
                let k = cum.iter().position(|&c| rel < c).unwrap_or(cum.len() - 1);
                let c = match &style.element_texture {
                    Some(t) => t.shade(sectors[k].color, x, y),
                    None => sectors[k].color,
                };
                self.raster.put_checked(x, y, c);
            }
        }
        if pie.separators && sectors.len() > 1 {
            for s in &sectors {
                let q = polar(center, r, s.start_deg);
                canvas::segment(&mut self.raster, center, q, 2.0, style.background, None, 0.0);
            }
        }
        match pie.label_mode {
            PieLabelMode::Legend => {}
            PieLabelMode::Connector => {
                for s in &sectors {
                    let mid = s.mid_deg();
                    let (a, b) = (polar(center, 0.75 * r, mid), polar(center, 1.2 * r, mid));
                    canvas::segment(&mut self.raster, a, b, 2.0, style.text_color, None, 0.0);
                    self.gt.connectors.push([a, b]);
                    let cos = mid.to_radians().cos();
                    let anchor = polar(center, 1.2 * r + 4.0, mid);
                    let h = if cos >= 0.0 { HAlign::Left } else { HAlign::Right };
                    let p = TextPlacement::anchored(&s.label, TEXT_SIZE, anchor, h, VAlign::Middle, 0.0);
                    self.push_pie_label(&p, center, r)?;
                }
            }
            PieLabelMode::Adjacent => {
                for s in &sectors {
                    let mid = s.mid_deg().to_radians();
                    let (sin, cos) = mid.sin_cos();
                    let anchor = polar(center, r + 8.0, s.mid_deg());
                    let h = if cos > 0.26 {
                        HAlign::Left
                    } else if cos < -0.26 {
                        HAlign::Right
                    } else {
                        HAlign::Center
                    };
                    let v = if sin > 0.26 {
                        VAlign::Bottom
                    } else if sin < -0.26 {
                        VAlign::Top
                    } else {
                        VAlign::Middle
                    };
                    let p = TextPlacement::anchored(&s.label, TEXT_SIZE, anchor, h, v, 0.0);
                    self.push_pie_label(&p, center, r)?;
                }
            }
        }
        let region = [center[0] - r, center[1] - r, center[0] + r, center[1] + r];
        self.gt.pies.push(PieGt { center, radius: r, sectors });
        self.gt.chart_region = region;
        Ok(())
    }

    fn push_pie_label(&mut self, p: &TextPlacement, center: [f64; 2], r: f64) -> Result<()> {
        let [x0, y0, x1, y1] = p.bbox();
        let dx = (x0 - center[0]).max(0.0).max(center[0] - x1);
        let dy = (y0 - center[1]).max(0.0).max(center[1] - y1);
        if dx.hypot(dy) < r + 3.0 {
            return Err(overflow(format!("pie label {:?} overlaps the disc", p.text)));
        }
        self.texts.push(text_gt(TextRole::PieLabel, p));
        Ok(())
    }

    fn check_texts(&self) -> Result<()> {
        let [w, h] = [self.spec.canvas[0] as f64, self.spec.canvas[1] as f64];
        let mut polys: Vec<(&str, [[f64; 2]; 4])> = Vec::with_capacity(self.texts.len() + 4);
        for t in &self.texts {
            polys.push((&t.text, t.polygon));
            if let Some(p) = t.superscript_polygon {
                polys.push((&t.text, p));
            }
        }
        for (text, p) in &polys {
            let b = polygon_bbox(p);
            if b[0] < 1.0 || b[1] < 1.0 || b[2] > w - 2.0 || b[3] > h - 2.0 {
                return Err(overflow(format!("text {text:?} leaves the canvas")));
            }
        }
        for i in 0..polys.len() {
            for j in 0..i {
                if polygons_overlap(&polys[i].1, &polys[j].1, 1.0) && !self.is_exponent_pair(&polys[i].1, &polys[j].1) {
                    return Err(overflow(format!("texts {:?} and {:?} collide", polys[i].0, polys[j].0)));
                }
            }
        }
        if let Some(l) = &self.gt.legend {
            let b = l.bbox;
            let rect = [[b[0], b[1]], [b[2], b[1]], [b[2], b[3]], [b[0], b[3]]];
            for t in self.texts.iter().filter(|t| t.role != TextRole::LegendEntry) {
                if polygons_overlap(&rect, &t.polygon, 2.0) {
                    return Err(overflow(format!("text {:?} collides with the legend", t.text)));
                }
            }
        }
        Ok(())
    }

    fn is_exponent_pair(&self, a: &[[f64; 2]; 4], b: &[[f64; 2]; 4]) -> bool {
        self.texts.iter().any(|t| {
            t.superscript_polygon.is_some_and(|s| (&t.polygon == a && &s == b) || (&t.polygon == b && &s == a))
        })
    }
}
