//! Static single-file SVG line and scatter plots.

use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f4e9c", "#b5361c", "#2c8a3c", "#7a4aa0"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Dashed,
    Dotted,
    Points,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

fn bounds(plot: &Plot) -> Option<(f64, f64, f64, f64)> {
    let mut it = plot.series.iter().flat_map(|s| s.points.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let &(x0, y0) = it.next()?;
    let (mut xa, mut xb, mut ya, mut yb) = (x0, x0, y0, y0);
    for &(x, y) in it {
        xa = xa.min(x);
        xb = xb.max(x);
        ya = ya.min(y);
        yb = yb.max(y);
    }
    if xb == xa {
        xa -= 0.5;
        xb += 0.5;
    }
    if yb == ya {
        ya -= 0.5;
        yb += 0.5;
    }
    let pad = 0.05 * (yb - ya);
    Some((xa, xb, ya - pad, yb + pad))
}

/// Up to ~6 round tick values covering `[a, b]`.
pub fn ticks(a: f64, b: f64) -> Vec<f64> {
    let span = b - a;
    if !(span > 0.0) || !span.is_finite() {
        return vec![a];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= 6.0).unwrap_or(10.0 * mag);
    let mut t = (a / step).ceil() * step;
    let mut out = Vec::new();
    while t <= b + 1e-9 * step {
        out.push(if t.abs() < 1e-12 * step { 0.0 } else { t });
        t += step;
    }
    out
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

pub fn render(plot: &Plot) -> String {
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, esc(&plot.title));
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let Some((xa, xb, ya, yb)) = bounds(plot) else {
        let _ = writeln!(s, "</svg>");
        return s;
    };
    let px = |x: f64| LEFT + (x - xa) / (xb - xa) * pw;
    let py = |y: f64| TOP + (yb - y) / (yb - ya) * ph;
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);
    for t in ticks(xa, xb) {
        let x = px(t);
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#ccc"/>"##, TOP, TOP + ph);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, TOP + ph + 16.0, num(t));
    }
    for t in ticks(ya, yb) {
        let y = py(t);
        let _ = writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ccc"/>"##, LEFT + pw);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, y + 4.0, num(t));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 12.0, esc(&plot.x_label));
    let _ = writeln!(s, r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#, TOP + ph / 2.0, TOP + ph / 2.0, esc(&plot.y_label));
    for (k, series) in plot.series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        match series.style {
            Style::Points => {
                for &(x, y) in series.points.iter().filter(|(x, y)| x.is_finite() && y.is_finite()) {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, px(x), py(y));
                }
            }
            style => {
                let dash = match style {
                    Style::Dashed => r#" stroke-dasharray="8 4""#,
                    Style::Dotted => r#" stroke-dasharray="2 3""#,
                    _ => "",
                };
                // break the polyline at non-finite samples
                let mut run: Vec<String> = Vec::new();
                let flush = |run: &mut Vec<String>, s: &mut String| {
                    if run.len() > 1 {
                        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{}"/>"#, run.join(" "));
                    }
                    run.clear();
                };
                for &(x, y) in &series.points {
                    if x.is_finite() && y.is_finite() {
                        run.push(format!("{:.2},{:.2}", px(x), py(y)));
                    } else {
                        flush(&mut run, &mut s);
                    }
                }
                flush(&mut run, &mut s);
            }
        }
        let ly = TOP + 14.0 + 16.0 * k as f64;
        let _ = writeln!(s, r#"<text x="{}" y="{ly}" text-anchor="end" fill="{color}">{}</text>"#, LEFT + pw - 8.0, esc(&series.label));
    }
    let _ = writeln!(s, "</svg>");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_values_are_round() {
        assert_eq!(ticks(-5.0, 15.0), vec![-5.0, 0.0, 5.0, 10.0, 15.0]);
        let t: Vec<String> = ticks(0.0, 1.0).into_iter().map(num).collect();
        assert_eq!(t, ["0", "0.2", "0.4", "0.6", "0.8", "1"]);
    }

    #[test]
    fn renders_lines_and_skips_gaps() {
        let p = Plot {
            title: "delta <a=3>".into(),
            x_label: "E".into(),
            y_label: "delta".into(),
            series: vec![Series { label: "a = 3".into(), points: vec![(0.0, 1.0), (1.0, 2.0), (2.0, f64::NAN), (3.0, 1.0), (4.0, 0.0)], style: Style::Dotted }],
        };
        let svg = render(&p);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("&lt;a=3&gt;"));
        assert_eq!(svg, render(&p));
    }

    #[test]
    fn empty_plot_is_valid() {
        let p = Plot { title: "t".into(), x_label: "x".into(), y_label: "y".into(), series: vec![] };
        assert!(render(&p).trim_end().ends_with("</svg>"));
    }
}
