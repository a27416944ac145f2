//! Minimal SVG line-and-marker chart for the `E N_q` figures.

use std::fmt::Write;

use super::reference::TABLE_A;
use super::tables::TableArtifact;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 64.0;
const MARGIN_RIGHT: f64 = 140.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 52.0;
const COLORS: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];

/// A "nice" tick step giving roughly `target` intervals over `span`.
fn tick_step(span: f64, target: f64) -> f64 {
    let raw = span / target;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm <= 1.0 {
        1.0
    } else if norm <= 2.0 {
        2.0
    } else if norm <= 2.5 {
        2.5
    } else if norm <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Renders one series per bank size in the table, `q` on the x axis and
/// `E N_q` on the y axis.
pub fn render_svg(table: &TableArtifact) -> String {
    let series: Vec<(u32, Vec<(u64, f64)>)> = TABLE_A
        .iter()
        .map(|&a| (a, table.series(a)))
        .filter(|(_, s)| !s.is_empty())
        .collect();
    let x_max = series
        .iter()
        .flat_map(|(_, s)| s.iter().map(|&(q, _)| q as f64))
        .fold(1.0, f64::max);
    let y_max = series
        .iter()
        .flat_map(|(_, s)| s.iter().map(|&(_, v)| v))
        .fold(1.0, f64::max);
    let x_step = tick_step(x_max, 10.0);
    let y_step = tick_step(y_max, 8.0);
    let x_top = (x_max / x_step).ceil() * x_step;
    let y_top = (y_max / y_step).ceil() * y_step;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + x / x_top * plot_w;
    let py = |y: f64| MARGIN_TOP + plot_h - y / y_top * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<title>{}</title>"#, table.name);
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // axes
    let (x0, y0) = (px(0.0), py(0.0));
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
        px(x_top)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{:.2}" stroke="black"/>"#,
        py(y_top)
    );
    let mut t = 0.0;
    while t <= x_top + 1e-9 {
        let x = px(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#,
            y0 + 4.0,
            y0 + 18.0
        );
        t += x_step;
    }
    let mut t = 0.0;
    while t <= y_top + 1e-9 {
        let y = py(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#,
            x0 - 4.0,
            x0 - 8.0,
            y + 4.0
        );
        t += y_step;
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">q, number of questions</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">E N_q</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );

    for (i, (a, points)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = points
            .iter()
            .map(|&(q, v)| format!("{:.2},{:.2}", px(q as f64), py(v)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<g class="series" data-a="{a}"><polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        for &(q, v) in points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="white" stroke="{color}"><title>a={a}, q={q}: {v:.3}</title></circle>"#,
                px(q as f64),
                py(v)
            );
        }
        if let Some(&(q, v)) = points.last() {
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" fill="{color}">{a} alternatives</text>"#,
                px(q as f64) + 8.0,
                py(v) + 4.0
            );
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::tables::{TableName, TableRow};

    #[test]
    fn ticks_are_round() {
        assert_eq!(tick_step(200.0, 10.0), 20.0);
        assert_eq!(tick_step(20.0, 10.0), 2.0);
        assert_eq!(tick_step(130.0, 8.0), 20.0);
    }

    #[test]
    fn svg_has_one_group_per_series() {
        let rows = [5u32, 10, 20]
            .iter()
            .flat_map(|&a| {
                (1..=3u64).map(move |q| TableRow::Value {
                    a,
                    q,
                    value: f64::from(a) * q as f64,
                    value_rounded: 0.0,
                })
            })
            .collect();
        let svg = render_svg(&TableArtifact {
            name: TableName::FigLow,
            rows,
        });
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<g class=\"series\"").count(), 3);
        assert_eq!(svg.matches("<circle").count(), 9);
        assert!(svg.contains("q, number of questions"));
        assert!(svg.contains("E N_q"));
    }
}
