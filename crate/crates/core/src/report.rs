//! CSV and SVG renderings of results.
//!
//! CSV output uses a header row, LF line endings and Rust's shortest
//! round-trip float formatting, so identical inputs give identical bytes.

use std::fmt::Write;

use crate::functionals::Table1Row;
use crate::mc::{DeviationCurve, HistogramResult};

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("family,params,alpha,D,sigma\n");
    for row in rows {
        let params = row
            .spec
            .params()
            .iter()
            .map(|(name, value)| format!("{name}={value}"))
            .collect::<Vec<_>>()
            .join(";");
        let sigma = row.sigma.std_dev();
        writeln!(
            out,
            "{},{},{},{},{}",
            row.spec.family(),
            params,
            row.alpha,
            row.d,
            sigma
        )
        .unwrap();
    }
    out
}

pub fn curve_csv(curve: &DeviationCurve) -> String {
    let mut out = String::from("N,p_hat,stderr,count\n");
    for p in &curve.points {
        writeln!(out, "{},{},{},{}", p.n, p.p_hat, p.stderr, p.count).unwrap();
    }
    out
}

pub fn histogram_csv(hist: &HistogramResult) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (edges, count) in hist.bin_edges.windows(2).zip(&hist.counts) {
        writeln!(out, "{},{},{}", edges[0], edges[1], count).unwrap();
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn svg_open(title: &str) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    )
    .unwrap();
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn scale(value: f64, lo: f64, hi: f64, out_lo: f64, out_hi: f64) -> f64 {
    if hi > lo {
        out_lo + (value - lo) / (hi - lo) * (out_hi - out_lo)
    } else {
        0.5 * (out_lo + out_hi)
    }
}

fn axis_labels(out: &mut String, x: (f64, f64), y: (String, String), x_name: &str, y_name: &str) {
    let bottom = HEIGHT - MARGIN;
    let right = WIDTH - MARGIN;
    writeln!(
        out,
        r#"<text x="{MARGIN}" y="{}" text-anchor="start">{}</text>"#,
        bottom + 16.0,
        x.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{right}" y="{}" text-anchor="end">{}</text>"#,
        bottom + 16.0,
        x.1
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{x_name}</text>"#,
        WIDTH / 2.0,
        bottom + 32.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{bottom}" text-anchor="end">{}</text>"#,
        MARGIN - 4.0,
        y.0
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
        MARGIN - 4.0,
        MARGIN + 10.0,
        y.1
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">{y_name}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    )
    .unwrap();
}

/// Deviation curves on a log10 probability axis; zero estimates are skipped.
pub fn curves_svg(title: &str, series: &[(String, &DeviationCurve)]) -> String {
    let mut out = svg_open(title);
    let points = || series.iter().flat_map(|(_, c)| c.points.iter());
    let (n_lo, n_hi) = points().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
        (a.min(p.n as f64), b.max(p.n as f64))
    });
    let logs = || points().filter(|p| p.p_hat > 0.0).map(|p| p.p_hat.log10());
    let y_lo = logs().fold(f64::INFINITY, f64::min).floor();
    let y_hi = logs()
        .fold(f64::NEG_INFINITY, f64::max)
        .ceil()
        .max(y_lo + 1.0);
    let (y_lo, y_hi) = if y_lo.is_finite() {
        (y_lo, y_hi)
    } else {
        (-1.0, 0.0)
    };
    for (i, (label, curve)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let coords: Vec<String> = curve
            .points
            .iter()
            .filter(|p| p.p_hat > 0.0)
            .map(|p| {
                let x = scale(p.n as f64, n_lo, n_hi, MARGIN, WIDTH - MARGIN);
                let y = scale(p.p_hat.log10(), y_lo, y_hi, HEIGHT - MARGIN, MARGIN);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            MARGIN + 8.0,
            MARGIN + 16.0 * (i + 1) as f64,
            escape(label)
        )
        .unwrap();
    }
    axis_labels(
        &mut out,
        (n_lo, n_hi),
        (format!("1e{y_lo}"), format!("1e{y_hi}")),
        "N",
        "P(|estimate - ES| >= delta)",
    );
    out.push_str("</svg>\n");
    out
}

/// Bar chart of a histogram, with optional vertical reference lines.
pub fn histogram_svg(title: &str, hist: &HistogramResult, marks: &[f64]) -> String {
    let mut out = svg_open(title);
    let lo = hist.bin_edges[0];
    let hi = *hist.bin_edges.last().expect("edges");
    let top = hist.counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    for (edges, &count) in hist.bin_edges.windows(2).zip(&hist.counts) {
        let x0 = scale(edges[0], lo, hi, MARGIN, WIDTH - MARGIN);
        let x1 = scale(edges[1], lo, hi, MARGIN, WIDTH - MARGIN);
        let y = scale(count as f64, 0.0, top, HEIGHT - MARGIN, MARGIN);
        writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="#1f77b4"/>"##,
            (x1 - x0).max(0.5),
            HEIGHT - MARGIN - y
        )
        .unwrap();
    }
    for &mark in marks.iter().filter(|&&m| m >= lo && m <= hi) {
        let x = scale(mark, lo, hi, MARGIN, WIDTH - MARGIN);
        writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{MARGIN}" x2="{x:.2}" y2="{}" stroke="#d62728" stroke-dasharray="4 3"/>"##,
            HEIGHT - MARGIN
        )
        .unwrap();
    }
    axis_labels(
        &mut out,
        (lo, hi),
        ("0".into(), format!("{top}")),
        "estimate",
        "count",
    );
    out.push_str("</svg>\n");
    out
}
