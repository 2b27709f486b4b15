//! Minimal SVG line chart of log10 mean gap against iteration.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{LabError, LabResult};
use crate::runner::ExperimentResult;

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 560.0;
const MARGIN: f64 = 60.0;
const LEGEND: f64 = 220.0;
const WHISKER_EVERY: usize = 50;
/// Gaps below this are drawn at the floor of the log axis.
const FLOOR: f64 = 1e-12;

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

fn lg(v: f64) -> f64 {
    v.max(FLOOR).log10()
}

pub fn render(result: &ExperimentResult) -> String {
    let len = result.series.iter().map(|s| s.stats.len()).max().unwrap_or(1).max(2);
    let (mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in &result.series {
        for (m, e) in s.stats.mean.iter().zip(&s.stats.stderr) {
            ymin = ymin.min(lg(m - e).max(lg(*m) - 1.0));
            ymax = ymax.max(lg(m + e));
        }
    }
    if !(ymin.is_finite() && ymax.is_finite()) || ymax - ymin < 1e-9 {
        ymin = -1.0;
        ymax = 1.0;
    }
    let (ymin, ymax) = (ymin.floor(), ymax.ceil());
    let plot_w = WIDTH - 2.0 * MARGIN - LEGEND;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let px = |t: usize| MARGIN + (t - 1) as f64 / (len - 1) as f64 * plot_w;
    let py = |v: f64| MARGIN + (ymax - v) / (ymax - ymin) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{} (trials={}, seed={})</text>"#,
        MARGIN + plot_w / 2.0,
        escape(&result.spec.name),
        result.spec.trials,
        result.spec.seed
    );
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let mut e = ymin as i64;
    while e <= ymax as i64 {
        let y = py(e as f64);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">1e{e}</text>"##,
            MARGIN + plot_w,
            MARGIN - 6.0,
            y + 4.0
        );
        e += 1;
    }
    let step = nice_step(len);
    let mut t = step;
    while t <= len {
        let x = px(t);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            MARGIN + plot_h + 18.0
        );
        t += step;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">iteration t</text>"#,
        MARGIN + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" transform="rotate(-90 16 {:.2})" text-anchor="middle">mean relative gap (log scale)</text>"#,
        MARGIN + plot_h / 2.0,
        MARGIN + plot_h / 2.0
    );

    for (i, s) in result.series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts = String::new();
        for (k, m) in s.stats.mean.iter().enumerate() {
            let _ = write!(pts, "{:.2},{:.2} ", px(k + 1), py(lg(*m)));
        }
        let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.trim_end());
        let mut t = WHISKER_EVERY;
        while t <= s.stats.len() {
            let (m, se) = (s.stats.at(t), s.stats.stderr[t - 1]);
            let x = px(t);
            let (y1, y2) = (py(lg(m - se).max(ymin)), py(lg(m + se)));
            let _ = writeln!(
                svg,
                r#"<path d="M{x:.2},{y1:.2}V{y2:.2}M{:.2},{y1:.2}h6M{:.2},{y2:.2}h6" stroke="{color}"/>"#,
                x - 3.0,
                x - 3.0
            );
            t += WHISKER_EVERY;
        }
        let ly = MARGIN + 10.0 + 18.0 * i as f64;
        let lx = WIDTH - LEGEND - MARGIN + 20.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn nice_step(len: usize) -> usize {
    let raw = len as f64 / 8.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    (step as usize).max(1)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn plot_svg(result: &ExperimentResult, path: &Path) -> LabResult<()> {
    if result.series.is_empty() {
        return Err(LabError::InvalidSpec("no results to plot".into()));
    }
    fs::write(path, render(result)).map_err(|e| LabError::io(path, e))
}
