use std::fmt::Write as _;

use rigidity_core::Graph;

pub const VIEWPORT: f64 = 1000.0;
pub const MARGIN: f64 = 0.05 * VIEWPORT;

/// Fits `points` into the viewport (aspect preserved, y axis up) and draws
/// edges, vertices and labels.
pub fn render(g: &Graph, points: &[(f64, f64)]) -> String {
    let placed = fit(points);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{VIEWPORT}" height="{VIEWPORT}" viewBox="0 0 {VIEWPORT} {VIEWPORT}">"#
    );
    out.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    out.push_str("<g stroke=\"#444\" stroke-width=\"1.5\">\n");
    for e in g.edges() {
        let (a, b) = (placed[e.low()], placed[e.high()]);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
            a.0, a.1, b.0, b.1
        );
    }
    out.push_str("</g>\n<g fill=\"#b22\">\n");
    for (x, y) in &placed {
        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="6"/>"#);
    }
    out.push_str("</g>\n<g font-family=\"sans-serif\" font-size=\"14\" fill=\"#000\">\n");
    for (v, (x, y)) in placed.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{v}</text>"#,
            x + 8.0,
            y - 8.0
        );
    }
    out.push_str("</g>\n</svg>\n");
    out
}

fn fit(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if points.is_empty() {
        return Vec::new();
    }
    let min_x = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let max_x = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let min_y = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max_y = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let span = (max_x - min_x).max(max_y - min_y);
    let inner = VIEWPORT - 2.0 * MARGIN;
    let scale = if span > 0.0 { inner / span } else { 0.0 };
    points
        .iter()
        .map(|&(x, y)| {
            if span > 0.0 {
                (
                    MARGIN + (x - min_x) * scale,
                    VIEWPORT - MARGIN - (y - min_y) * scale,
                )
            } else {
                (VIEWPORT / 2.0, VIEWPORT / 2.0)
            }
        })
        .collect()
}
