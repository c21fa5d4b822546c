//! SVG charts for lab reports.
//!
//! Charts are rebuilt from the written report.csv, never from in-memory
//! state, so a plot can always be regenerated from the artifact on disk and
//! plotting can never change the numbers. All coordinates are formatted at
//! fixed precision; bytes depend only on the CSV content.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use crate::commands::write_text;

#[derive(Debug, Deserialize)]
struct PlotRow {
    check: String,
    graph: String,
    params: String,
    lhs: f64,
    rhs: f64,
    margin: f64,
    verdict: String,
    #[allow(dead_code)]
    note: String,
}

/// Writes the charts for `lab` and returns the written paths: a per-row
/// comparison chart for every lab, plus a density-vs-p line chart for the
/// sharpness sweep.
pub fn emit(lab: &str, csv_path: &Path, out: &Path) -> Result<Vec<PathBuf>> {
    let rows = read_rows(csv_path)?;
    let mut written = Vec::new();

    let overview = out.join(format!("{lab}_overview.svg"));
    write_text(&overview, &forest(lab, &rows))?;
    written.push(overview);

    if lab == "sharpness" {
        let series = density_series(&rows);
        if !series.is_empty() {
            let sweep = out.join("sharpness_sweep.svg");
            write_text(
                &sweep,
                &line_chart("median giant density vs p", "p", "median density", &series),
            )?;
            written.push(sweep);
        }
    }
    Ok(written)
}

fn read_rows(csv_path: &Path) -> Result<Vec<PlotRow>> {
    let mut reader = csv::Reader::from_path(csv_path)
        .with_context(|| format!("reading {}", csv_path.display()))?;
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row.context("malformed report row")?);
    }
    Ok(rows)
}

/// The sharpness per-(graph, p) rows report the median giant density as rhs.
fn density_series(rows: &[PlotRow]) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for row in rows.iter().filter(|r| r.check == "k1-quantiles") {
        let Some(p) = parse_param(&row.params, "p") else { continue };
        if !row.rhs.is_finite() {
            continue;
        }
        match series.iter_mut().find(|(name, _)| *name == row.graph) {
            Some((_, points)) => points.push((p, row.rhs)),
            None => series.push((row.graph.clone(), vec![(p, row.rhs)])),
        }
    }
    for (_, points) in &mut series {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    series
}

/// Extracts `key=VALUE` from a params string like "p=0.45 trials=400".
fn parse_param(params: &str, key: &str) -> Option<f64> {
    params
        .split_whitespace()
        .find_map(|part| part.strip_prefix(key)?.strip_prefix('='))
        .and_then(|v| v.parse().ok())
}

fn verdict_color(verdict: &str) -> &'static str {
    match verdict {
        "pass" => "#2e7d46",
        "fail" => "#b3373b",
        "inconclusive" => "#c78a19",
        _ => "#6b7280",
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn truncate(text: &str, max: usize) -> String {
    if text.chars().count() <= max {
        return text.to_string();
    }
    let head: String = text.chars().take(max.saturating_sub(2)).collect();
    format!("{head}..")
}

fn fmt_value(v: f64) -> String {
    if !v.is_finite() {
        "n/a".to_string()
    } else if v.abs() >= 1000.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.3}")
    } else {
        format!("{v:.4}")
    }
}

/// One lane per row: lhs dot (verdict-colored) against ticks at rhs and
/// rhs+margin, each lane scaled independently since rows mix units.
fn forest(lab: &str, rows: &[PlotRow]) -> String {
    const WIDTH: f64 = 980.0;
    const ROW_H: f64 = 22.0;
    const TOP: f64 = 46.0;
    const PLOT_X: f64 = 380.0;
    const PLOT_W: f64 = 400.0;
    let height = TOP + rows.len() as f64 * ROW_H + 16.0;

    let mut svg = svg_open(WIDTH, height);
    let _ = writeln!(
        svg,
        r##"<text x="16" y="24" font-size="15" font-weight="bold">{} lab: lhs (dot) vs rhs (tick) and rhs+margin (dark tick)</text>"##,
        escape(lab)
    );
    for (i, row) in rows.iter().enumerate() {
        let y = TOP + i as f64 * ROW_H + ROW_H / 2.0;
        let label = truncate(&format!("{} {} {}", row.check, row.graph, row.params), 56);
        let _ = writeln!(
            svg,
            r##"<text x="16" y="{:.2}" font-size="11">{}</text>"##,
            y + 4.0,
            escape(&label)
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{PLOT_X:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#d4d4d8" stroke-width="1"/>"##,
            PLOT_X + PLOT_W
        );
        let guarded = row.rhs + row.margin;
        let finite: Vec<f64> = [row.lhs, row.rhs, guarded]
            .into_iter()
            .filter(|v| v.is_finite())
            .collect();
        let lo = finite.iter().copied().fold(0.0_f64, f64::min);
        let hi = finite.iter().copied().fold(0.0_f64, f64::max);
        let span = (hi - lo).max(1e-12);
        let x_of = |v: f64| PLOT_X + (v - lo) / span * PLOT_W;
        if row.rhs.is_finite() {
            let x = x_of(row.rhs);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#9ca3af" stroke-width="2"/>"##,
                y - 5.0,
                y + 5.0
            );
        }
        if guarded.is_finite() && row.margin > 0.0 {
            let x = x_of(guarded);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#111827" stroke-width="2"/>"##,
                y - 7.0,
                y + 7.0
            );
        }
        if row.lhs.is_finite() {
            let _ = writeln!(
                svg,
                r##"<circle cx="{:.2}" cy="{y:.2}" r="4" fill="{}"/>"##,
                x_of(row.lhs),
                verdict_color(&row.verdict)
            );
        }
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-size="11" fill="{}">{} vs {} [{}]</text>"##,
            PLOT_X + PLOT_W + 10.0,
            y + 4.0,
            verdict_color(&row.verdict),
            fmt_value(row.lhs),
            fmt_value(row.rhs),
            escape(&row.verdict)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

const PALETTE: [&str; 6] = ["#3b6dc4", "#c4703b", "#4f9d69", "#8a5fb0", "#b03060", "#708090"];

fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    const WIDTH: f64 = 820.0;
    const HEIGHT: f64 = 440.0;
    const L: f64 = 70.0;
    const R: f64 = 200.0;
    const T: f64 = 48.0;
    const B: f64 = 52.0;
    let pw = WIDTH - L - R;
    let ph = HEIGHT - T - B;

    let xs: Vec<f64> = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.0)).collect();
    let ys: Vec<f64> = series.iter().flat_map(|(_, pts)| pts.iter().map(|p| p.1)).collect();
    let (x_lo, x_hi) = padded_range(&xs);
    let (y_lo, y_hi) = padded_range(&ys);
    let x_of = |v: f64| L + (v - x_lo) / (x_hi - x_lo) * pw;
    let y_of = |v: f64| T + ph - (v - y_lo) / (y_hi - y_lo) * ph;

    let mut svg = svg_open(WIDTH, HEIGHT);
    let _ = writeln!(
        svg,
        r##"<text x="{L:.2}" y="26" font-size="15" font-weight="bold">{}</text>"##,
        escape(title)
    );
    for i in 0..=4 {
        let fx = x_lo + (x_hi - x_lo) * i as f64 / 4.0;
        let fy = y_lo + (y_hi - y_lo) * i as f64 / 4.0;
        let gx = x_of(fx);
        let gy = y_of(fy);
        let _ = writeln!(
            svg,
            r##"<line x1="{gx:.2}" y1="{T:.2}" x2="{gx:.2}" y2="{:.2}" stroke="#e5e7eb"/>"##,
            T + ph
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{L:.2}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#e5e7eb"/>"##,
            L + pw
        );
        let _ = writeln!(
            svg,
            r##"<text x="{gx:.2}" y="{:.2}" font-size="11" text-anchor="middle">{:.3}</text>"##,
            T + ph + 18.0,
            fx
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{:.3}</text>"##,
            L - 8.0,
            gy + 4.0,
            fy
        );
    }
    let _ = writeln!(
        svg,
        r##"<rect x="{L:.2}" y="{T:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="#374151"/>"##
    );
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"##,
        L + pw / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r##"<text x="18" y="{:.2}" font-size="12" transform="rotate(-90 18 {:.2})" text-anchor="middle">{}</text>"##,
        T + ph / 2.0,
        T + ph / 2.0,
        escape(y_label)
    );

    for (si, (name, points)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let path: Vec<String> =
            points.iter().map(|&(x, y)| format!("{:.2},{:.2}", x_of(x), y_of(y))).collect();
        if points.len() > 1 {
            let _ = writeln!(
                svg,
                r##"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"##,
                path.join(" ")
            );
        }
        for &(x, y) in points {
            let _ = writeln!(
                svg,
                r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"##,
                x_of(x),
                y_of(y)
            );
        }
        let ly = T + 10.0 + si as f64 * 18.0;
        let _ = writeln!(
            svg,
            r##"<rect x="{:.2}" y="{:.2}" width="10" height="10" fill="{color}"/>"##,
            L + pw + 16.0,
            ly
        );
        let _ = writeln!(
            svg,
            r##"<text x="{:.2}" y="{:.2}" font-size="11">{}</text>"##,
            L + pw + 32.0,
            ly + 9.0,
            escape(name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn padded_range(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    let pad = ((hi - lo) * 0.06).max(1e-9);
    (lo - pad, hi + pad)
}

fn svg_open(width: f64, height: f64) -> String {
    format!(
        concat!(
            r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" "##,
            r##"viewBox="0 0 {w} {h}" font-family="sans-serif">"##,
            "\n",
            r##"<rect width="{w}" height="{h}" fill="white"/>"##,
            "\n"
        ),
        w = width,
        h = height
    )
}
