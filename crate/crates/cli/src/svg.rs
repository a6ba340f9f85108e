//! Minimal self-contained SVG line plot of `|A(t)|²`. Hand-emitted
//! polylines only — no external assets, no styling dependencies.

use crate::out::{fmt_f64, svg_header};

const W: f64 = 900.0;
const H: f64 = 480.0;
const ML: f64 = 64.0; // left margin (axis labels)
const MR: f64 = 16.0;
const MT: f64 = 20.0;
const MB: f64 = 44.0;

/// Render times vs `|A|²` as a fixed-size line plot. The y-axis always
/// spans [0, max(1, data max)] so traces are comparable across runs.
pub fn line_plot(times: &[f64], abs2: &[f64], config_hash: u64) -> String {
    assert_eq!(times.len(), abs2.len());
    let (t0, t1) = match (times.first(), times.last()) {
        (Some(&a), Some(&b)) if b > a => (a, b),
        _ => (0.0, 1.0),
    };
    let y_max = abs2.iter().cloned().fold(1.0_f64, f64::max);
    let x_of = |t: f64| ML + (t - t0) / (t1 - t0) * (W - ML - MR);
    let y_of = |y: f64| H - MB - (y / y_max) * (H - MT - MB);

    let mut points = String::new();
    for (&t, &y) in times.iter().zip(abs2) {
        if !points.is_empty() {
            points.push(' ');
        }
        points.push_str(&format!("{:.2},{:.2}", x_of(t), y_of(y.clamp(0.0, y_max))));
    }

    let mut s = String::new();
    s.push_str(&svg_header(config_hash));
    s.push('\n');
    s.push_str(&format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {W} {H}" font-family="monospace" font-size="12">"#
    ));
    s.push('\n');
    s.push_str(&format!(
        r#"<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>"#
    ));
    s.push('\n');
    // Axes.
    s.push_str(&format!(
        r#"<line x1="{ML}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#,
        y0 = H - MB,
        x1 = W - MR
    ));
    s.push('\n');
    s.push_str(&format!(
        r#"<line x1="{ML}" y1="{MT}" x2="{ML}" y2="{y0}" stroke="black"/>"#,
        y0 = H - MB
    ));
    s.push('\n');
    // Tick labels: time range and |A|² range.
    s.push_str(&format!(
        r#"<text x="{ML}" y="{y}" text-anchor="middle">{v}</text>"#,
        y = H - MB + 18.0,
        v = fmt_f64(t0)
    ));
    s.push('\n');
    s.push_str(&format!(
        r#"<text x="{x}" y="{y}" text-anchor="middle">{v}</text>"#,
        x = W - MR,
        y = H - MB + 18.0,
        v = fmt_f64(t1)
    ));
    s.push('\n');
    s.push_str(&format!(
        r#"<text x="{x}" y="{y}" text-anchor="end">0</text>"#,
        x = ML - 8.0,
        y = H - MB + 4.0
    ));
    s.push('\n');
    s.push_str(&format!(
        r#"<text x="{x}" y="{y}" text-anchor="end">{v}</text>"#,
        x = ML - 8.0,
        y = MT + 4.0,
        v = fmt_f64(y_max)
    ));
    s.push('\n');
    s.push_str(&format!(
        r#"<text x="{x}" y="{y}" text-anchor="middle">t</text>"#,
        x = (ML + W - MR) / 2.0,
        y = H - 8.0
    ));
    s.push('\n');
    s.push_str(&format!(
        r#"<text x="14" y="{y}" text-anchor="middle" transform="rotate(-90 14 {y})">|A(t)|^2</text>"#,
        y = (MT + H - MB) / 2.0
    ));
    s.push('\n');
    s.push_str(&format!(
        r##"<polyline points="{points}" fill="none" stroke="#1f5fbf" stroke-width="1"/>"##
    ));
    s.push('\n');
    s.push_str("</svg>\n");
    s
}
