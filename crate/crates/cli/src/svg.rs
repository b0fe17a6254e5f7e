//! Small SVG emitter for the solution and histogram plots.
//!
//! Output depends only on the data, so identical runs give identical files.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;
const FONT: &str = "font-family=\"sans-serif\"";

/// One polyline.
#[derive(Debug, Clone)]
pub struct Series<'a> {
    pub name: &'a str,
    pub points: Vec<(f64, f64)>,
    pub color: &'a str,
    pub dashed: bool,
}

/// One group of the bar chart: a label and a value per bar kind.
#[derive(Debug, Clone)]
pub struct BarGroup<'a> {
    pub label: &'a str,
    pub values: Vec<f64>,
}

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn plot_w() -> f64 {
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    }

    fn plot_h() -> f64 {
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    }

    fn sx(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * Self::plot_w()
    }

    fn sy(&self, y: f64) -> f64 {
        MARGIN_TOP + Self::plot_h() - (y - self.y_min) / (self.y_max - self.y_min) * Self::plot_h()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(svg: &mut String, title: &str, x_label: &str, y_label: &str) {
    let _ = write!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n\
         <text x=\"{:.1}\" y=\"28\" text-anchor=\"middle\" {FONT} font-size=\"16\">{}</text>\n\
         <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"13\">{}</text>\n\
         <text x=\"18\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"13\" transform=\"rotate(-90 18 {:.1})\">{}</text>\n",
        WIDTH / 2.0,
        escape(title),
        MARGIN_LEFT + Frame::plot_w() / 2.0,
        HEIGHT - 15.0,
        escape(x_label),
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label),
    );
}

fn y_axis(svg: &mut String, frame: &Frame, ticks: usize) {
    for i in 0..=ticks {
        let v = frame.y_min + (frame.y_max - frame.y_min) * i as f64 / ticks as f64;
        let y = frame.sy(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#e5e5e5\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" {FONT} font-size=\"11\">{v:.2}</text>",
            MARGIN_LEFT + Frame::plot_w(),
            MARGIN_LEFT - 6.0,
            y + 4.0,
        );
    }
    let bottom = MARGIN_TOP + Frame::plot_h();
    let _ = writeln!(
        svg,
        "<line x1=\"{MARGIN_LEFT:.1}\" y1=\"{MARGIN_TOP:.1}\" x2=\"{MARGIN_LEFT:.1}\" y2=\"{bottom:.1}\" stroke=\"black\"/>\n\
         <line x1=\"{MARGIN_LEFT:.1}\" y1=\"{bottom:.1}\" x2=\"{:.1}\" y2=\"{bottom:.1}\" stroke=\"black\"/>",
        MARGIN_LEFT + Frame::plot_w(),
    );
}

fn legend(svg: &mut String, entries: &[(&str, &str, bool)]) {
    let x = MARGIN_LEFT + Frame::plot_w() - 190.0;
    for (i, (name, color, dashed)) in entries.iter().enumerate() {
        let y = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let dash = if *dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"{color}\" stroke-width=\"2.5\"{dash}/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" {FONT} font-size=\"12\">{}</text>",
            x + 28.0,
            x + 36.0,
            y + 4.0,
            escape(name),
        );
    }
}

/// Line chart over `[x_min, x_max]` with the y range padded around the data.
// Negated so NaN bounds also take the fallback.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series<'_>]) -> String {
    let all = series.iter().flat_map(|s| s.points.iter());
    let (mut x_min, mut x_max, mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x_min = x_min.min(x);
        x_max = x_max.max(x);
        y_min = y_min.min(y);
        y_max = y_max.max(y);
    }
    if !(x_max > x_min) {
        x_max = x_min + 1.0;
    }
    if !(y_max > y_min) {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let frame = Frame {
        x_min,
        x_max,
        y_min: y_min - pad,
        y_max: y_max + pad,
    };

    let mut svg = String::new();
    header(&mut svg, title, x_label, y_label);
    y_axis(&mut svg, &frame, 5);
    for i in 0..=5 {
        let v = x_min + (x_max - x_min) * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"11\">{v:.2}</text>",
            frame.sx(v),
            MARGIN_TOP + Frame::plot_h() + 16.0,
        );
    }
    for s in series {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.sx(x), frame.sy(y)))
            .collect();
        let dash = if s.dashed { " stroke-dasharray=\"6 4\"" } else { "" };
        let _ = writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{dash} points=\"{}\"/>",
            s.color,
            pts.join(" "),
        );
    }
    let entries: Vec<_> = series.iter().map(|s| (s.name, s.color, s.dashed)).collect();
    legend(&mut svg, &entries);
    svg.push_str("</svg>\n");
    svg
}

/// Grouped bar chart with a y axis from 0 to the largest value (at least 1e-12).
pub fn bar_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    kinds: &[(&str, &str)],
    groups: &[BarGroup<'_>],
) -> String {
    let top = groups
        .iter()
        .flat_map(|g| g.values.iter().copied())
        .fold(1e-12f64, f64::max);
    let frame = Frame {
        x_min: 0.0,
        x_max: groups.len().max(1) as f64,
        y_min: 0.0,
        y_max: top * 1.1,
    };
    let mut svg = String::new();
    header(&mut svg, title, x_label, y_label);
    y_axis(&mut svg, &frame, 5);
    let slot = Frame::plot_w() / groups.len().max(1) as f64;
    let bar_w = 0.8 * slot / kinds.len().max(1) as f64;
    for (gi, group) in groups.iter().enumerate() {
        let left = MARGIN_LEFT + slot * gi as f64 + 0.1 * slot;
        for (ki, v) in group.values.iter().enumerate() {
            let color = kinds.get(ki).map_or("gray", |k| k.1);
            let (y0, y1) = (frame.sy(0.0), frame.sy(*v));
            let _ = writeln!(
                svg,
                "<rect x=\"{:.2}\" y=\"{y1:.2}\" width=\"{bar_w:.2}\" height=\"{:.2}\" fill=\"{color}\"/>",
                left + bar_w * ki as f64,
                y0 - y1,
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" {FONT} font-size=\"12\">{}</text>",
            MARGIN_LEFT + slot * (gi as f64 + 0.5),
            MARGIN_TOP + Frame::plot_h() + 18.0,
            escape(group.label),
        );
    }
    let entries: Vec<_> = kinds.iter().map(|(n, c)| (*n, *c, false)).collect();
    legend(&mut svg, &entries);
    svg.push_str("</svg>\n");
    svg
}
