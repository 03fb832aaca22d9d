use std::collections::BTreeMap;
use std::fmt::Write;

use super::{ChartDatum, ChartSpec, ColorClass, Glyph, LineKind};

/// Fixed drawing constants shared by every chart.
#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub pitch: f64,
    pub margin: f64,
    pub spread: f64,
    pub radius: f64,
    pub box_side: f64,
    pub stroke: f64,
    pub font_size: f64,
    pub grid: &'static str,
    pub black: &'static str,
    pub green: &'static str,
    pub red: &'static str,
    pub d1: &'static str,
    pub differential: &'static str,
    pub hidden: &'static str,
    pub dash: &'static str,
}

pub const LAYOUT: Layout = Layout {
    pitch: 28.0,
    margin: 36.0,
    spread: 8.0,
    radius: 3.0,
    box_side: 8.0,
    stroke: 1.0,
    font_size: 7.0,
    grid: "#dddddd",
    black: "#000000",
    green: "#1a9641",
    red: "#d7191c",
    d1: "#7fb8e0",
    differential: "#2c7bb6",
    hidden: "#08306b",
    dash: "4,3",
};

fn color(c: ColorClass) -> &'static str {
    match c {
        ColorClass::Image => LAYOUT.green,
        ColorClass::Kernel => LAYOUT.black,
        ColorClass::NonPeriodic => LAYOUT.red,
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders chart data as an SVG 1.1 document. The output depends only on
/// the arguments.
pub fn emit_svg(data: &[ChartDatum], spec: &ChartSpec) -> String {
    let l = LAYOUT;
    let (s0, s1) = spec.stems;
    let fmax = spec.max_filtration.max(0);
    let cols = (s1 - s0).max(0) as f64;
    let width = 2.0 * l.margin + cols * l.pitch;
    let height = 2.0 * l.margin + fmax as f64 * l.pitch;
    let x_of = |s: i64| l.margin + (s - s0) as f64 * l.pitch;
    let y_of = |f: i64| l.margin + (fmax - f) as f64 * l.pitch;

    let mut slots: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for d in data {
        *slots.entry((d.s, d.f)).or_default() += 1;
    }
    let mut seen: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut centers: BTreeMap<(i64, i64, &str), (f64, f64)> = BTreeMap::new();
    let mut placed = Vec::with_capacity(data.len());
    for d in data {
        let n = slots[&(d.s, d.f)];
        let k = seen.entry((d.s, d.f)).or_default();
        let dx = (*k as f64 - (n as f64 - 1.0) / 2.0) * l.spread;
        *k += 1;
        let center = (x_of(d.s) + dx, y_of(d.f) - dx);
        centers.entry((d.s, d.f, d.label.as_str())).or_insert(center);
        placed.push(center);
    }

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let page = spec.page.map_or("infinity".to_string(), |r| r.to_string());
    let _ = writeln!(
        out,
        "<title>{} E_{page}, coweights {} mod {}</title>",
        escape(&spec.object),
        spec.residue,
        spec.modulus
    );
    let _ = writeln!(out, r#"<g stroke="{}" stroke-width="0.5">"#, l.grid);
    for s in s0..=s1 {
        let _ = writeln!(out, r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}"/>"#, y_of(fmax), y_of(0), x = x_of(s));
    }
    for f in 0..=fmax {
        let _ = writeln!(out, r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}"/>"#, x_of(s0), x_of(s1), y = y_of(f));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g font-family="sans-serif" font-size="{:.1}" text-anchor="middle">"#, l.font_size);
    for s in s0..=s1 {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">{s}</text>"#, x_of(s), y_of(0) + 2.0 * l.font_size);
    }
    for f in 0..=fmax {
        let _ = writeln!(out, r#"<text x="{:.1}" y="{:.1}">{f}</text>"#, x_of(s0) - 2.0 * l.font_size, y_of(f) + l.font_size / 2.0);
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g fill="none" stroke-width="{:.1}">"#, l.stroke);
    for (d, &(x, y)) in data.iter().zip(&placed) {
        for line in &d.lines {
            let (tx, ty) = centers
                .get(&(line.s, line.f, line.label.as_str()))
                .copied()
                .unwrap_or((x_of(line.s), y_of(line.f)));
            let stroke = match line.kind {
                LineKind::H1 | LineKind::Rho => color(d.color),
                LineKind::Differential(1) => l.d1,
                LineKind::Differential(_) => l.differential,
                LineKind::Hidden(_) => l.hidden,
            };
            let dash = if line.dashed { format!(r#" stroke-dasharray="{}""#, l.dash) } else { String::new() };
            let _ = writeln!(out, r#"<line x1="{x:.1}" y1="{y:.1}" x2="{tx:.1}" y2="{ty:.1}" stroke="{stroke}"{dash}/>"#);
        }
        if d.arrow {
            let (ax, ay) = (x + l.pitch / 3.0, y - l.pitch / 3.0);
            let _ = writeln!(
                out,
                r#"<path d="M {x:.1} {y:.1} L {ax:.1} {ay:.1} M {:.1} {ay:.1} L {ax:.1} {ay:.1} L {ax:.1} {:.1}" stroke="{}"/>"#,
                ax - 3.0,
                ay + 3.0,
                color(d.color)
            );
        }
    }
    let _ = writeln!(out, "</g>");

    for (d, &(x, y)) in data.iter().zip(&placed) {
        let c = color(d.color);
        let h = l.box_side / 2.0;
        let _ = writeln!(out, "<g><title>{}</title>", escape(&d.label));
        match d.glyph {
            Glyph::Circle => {
                let _ = writeln!(out, r#"<circle cx="{x:.1}" cy="{y:.1}" r="{:.1}" fill="{c}"/>"#, l.radius);
            }
            Glyph::OpenBox | Glyph::NumberedBox(_) => {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="white" stroke="{c}"/>"#,
                    x - h,
                    y - h,
                    l.box_side,
                    l.box_side
                );
                if let Glyph::NumberedBox(n) = d.glyph {
                    let _ = writeln!(
                        out,
                        r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="{:.1}" text-anchor="middle" fill="{c}">{n}</text>"#,
                        y + l.font_size / 2.5,
                        l.font_size
                    );
                }
            }
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_chart_is_a_grid() {
        let spec = ChartSpec::new("ko_C", None, (0, 3), 2, (0, 0));
        let svg = emit_svg(&[], &spec);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<line").count(), 4 + 3);
        assert!(!svg.contains("<circle"));
    }
}
