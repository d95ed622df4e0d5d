//! Self-contained SVG line charts of comparison reports.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::report::{ComparisonReport, Method};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 140.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

fn colour(m: Method) -> &'static str {
    match m {
        Method::Ladm => "#1f77b4",
        Method::Hbm => "#ff7f0e",
        Method::Dtm => "#2ca02c",
        Method::Hpm => "#9467bd",
        Method::Oracle => "#d62728",
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders one polyline per method column, with axes, ticks and a legend.
pub fn render_svg(report: &ComparisonReport) -> Result<String> {
    let n = report.grid.len();
    if n < 2 {
        return Err(Error::Precondition(format!(
            "a plot needs at least 2 grid points, got {n}"
        )));
    }
    let methods = report.methods();
    let t_min = report.grid[0];
    let t_max = report.grid[n - 1];
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for m in &methods {
        for &y in report.columns[m.as_str()].iter().filter(|y| y.is_finite()) {
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !y_min.is_finite() {
        (y_min, y_max) = (-1.0, 1.0);
    }
    if y_max - y_min < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_min, y_max) = (y_min - pad, y_max + pad);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |t: f64| MARGIN_LEFT + (t - t_min) / (t_max - t_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        escape(&format!("Relativistic oscillator, beta = {}", report.beta))
    );

    // Axes and ticks.
    let (x0, y0, x1, y1) = (MARGIN_LEFT, MARGIN_TOP + plot_h, MARGIN_LEFT + plot_w, MARGIN_TOP);
    let _ = writeln!(
        svg,
        r##"<g stroke="#000" stroke-width="1"><line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/><line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/></g>"##
    );
    for i in 0..=TICKS {
        let frac = i as f64 / TICKS as f64;
        let t = t_min + frac * (t_max - t_min);
        let y = y_min + frac * (y_max - y_min);
        let (px, py) = (sx(t), sy(y));
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.2}" stroke="#000"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{t:.2}</text>"##,
            y0 + 5.0,
            y0 + 20.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="#000"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.4}</text>"##,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">t</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">x(t)</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    for (k, m) in methods.iter().enumerate() {
        let points: Vec<String> = report
            .grid
            .iter()
            .zip(&report.columns[m.as_str()])
            .filter(|(_, y)| y.is_finite())
            .map(|(&t, &y)| format!("{:.3},{:.3}", sx(t), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            colour(*m),
            points.join(" ")
        );
        let ly = MARGIN_TOP + 10.0 + 20.0 * k as f64;
        let lx = WIDTH - MARGIN_RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="3"/><text x="{}" y="{}">{}</text>"#,
            lx + 25.0,
            colour(*m),
            lx + 32.0,
            ly + 4.0,
            m.as_str().to_uppercase()
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
