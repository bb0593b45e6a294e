//! Static line charts of ensemble curves, one polyline per run.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum SvgError {
    #[error("nothing to plot: every series is empty")]
    Empty,
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Palette {
    Red,
    Grey,
}

impl Palette {
    fn tones(self) -> &'static [&'static str] {
        match self {
            Palette::Red => &["#b2182b", "#d6604d", "#e34a33", "#c51b1b", "#ef6548"],
            Palette::Grey => &["#525252", "#737373", "#969696", "#636363", "#858585"],
        }
    }
}

/// The runs of one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub label: String,
    pub palette: Palette,
    pub series: Vec<Vec<f64>>,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders the chart. The x axis is the index within a series (the day), the
/// y axis starts at zero.
pub fn render_svg(sets: &[CurveSet], title: &str, y_label: &str) -> Result<String, SvgError> {
    let longest = sets.iter().flat_map(|s| &s.series).map(Vec::len).max().unwrap_or(0);
    if longest == 0 {
        return Err(SvgError::Empty);
    }
    let x_max = (longest - 1).max(1) as f64;
    let data_max = sets
        .iter()
        .flat_map(|s| &s.series)
        .flatten()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let y_max = if data_max > 0.0 { data_max * 1.05 } else { 1.0 };
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + x / x_max * plot_w;
    let py = |y: f64| TOP + plot_h - y / y_max * plot_h;

    let mut s = String::new();
    // Writing to a String cannot fail.
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // axes and ticks
    let (x0, y0, x1, y1) = (LEFT, TOP + plot_h, LEFT + plot_w, TOP);
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1">"#);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y0:.2}"/>"#);
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{y1:.2}"/>"#);
    let x_step = ((x_max / 10.0).ceil() as usize).max(1);
    for d in (0..=x_max as usize).step_by(x_step) {
        let x = px(d as f64);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}"/>"#, y0 + 5.0);
    }
    for i in 0..=5 {
        let y = py(y_max * i as f64 / 5.0);
        let _ = writeln!(s, r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}"/>"#, x0 - 5.0);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="black">"#);
    for d in (0..=x_max as usize).step_by(x_step) {
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{d}</text>"#, px(d as f64), y0 + 20.0);
    }
    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#, x0 - 8.0, py(v) + 4.0);
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">day</text>"#, LEFT + plot_w / 2.0, HEIGHT - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0,
        escape(y_label)
    );
    let _ = writeln!(s, "</g>");

    for set in sets {
        let tones = set.palette.tones();
        let _ = writeln!(s, r#"<g fill="none" stroke-width="1" stroke-opacity="0.45">"#);
        for (i, series) in set.series.iter().enumerate().filter(|(_, v)| !v.is_empty()) {
            let points: Vec<String> = series
                .iter()
                .enumerate()
                .map(|(d, &v)| format!("{:.2},{:.2}", px(d as f64), py(if v.is_finite() { v } else { 0.0 })))
                .collect();
            let _ = writeln!(s, r#"<polyline stroke="{}" points="{}"/>"#, tones[i % tones.len()], points.join(" "));
        }
        let _ = writeln!(s, "</g>");
    }

    // legend
    for (i, set) in sets.iter().enumerate() {
        let y = TOP + 10.0 + 20.0 * i as f64;
        let x = LEFT + plot_w - 180.0;
        let _ = writeln!(
            s,
            r#"<rect x="{x:.2}" y="{:.2}" width="20" height="4" fill="{}"/>"#,
            y - 2.0,
            set.palette.tones()[0]
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, x + 28.0, y + 4.0, escape(&set.label));
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}

pub fn emit_svg_plot(sets: &[CurveSet], title: &str, y_label: &str, path: &Path) -> Result<(), SvgError> {
    let text = render_svg(sets, title, y_label)?;
    std::fs::write(path, text).map_err(|source| SvgError::Io { path: path.to_owned(), source })
}
