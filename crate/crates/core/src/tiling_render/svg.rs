use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::Polyline;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderConfig {
    /// Pixels per unit.
    pub scale: f64,
    pub stroke_width: f64,
    pub palette: Vec<String>,
    /// Margin in pixels around the drawing.
    pub margin: f64,
    /// Fill closed paths with their palette colour.
    pub fill: bool,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            scale: 100.0,
            stroke_width: 1.0,
            palette: ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            margin: 10.0,
            fill: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SvgItem {
    pub polyline: Polyline,
    /// Index into the palette.
    pub color: usize,
}

fn num(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// An SVG 1.1 document with one `<path>` per item. The y axis points up.
pub fn render_svg(items: &[SvgItem], config: &RenderConfig) -> String {
    let scale = if config.scale > 0.0 { config.scale } else { 1.0 };
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for it in items {
        if let Some((a, b)) = it.polyline.bbox() {
            lo = [lo[0].min(a[0]), lo[1].min(a[1])];
            hi = [hi[0].max(b[0]), hi[1].max(b[1])];
        }
    }
    if !lo[0].is_finite() {
        lo = [0.0, 0.0];
        hi = [0.0, 0.0];
    }
    let m = config.margin;
    let width = (hi[0] - lo[0]) * scale + 2.0 * m;
    let height = (hi[1] - lo[1]) * scale + 2.0 * m;
    let tx = |x: f64| (x - lo[0]) * scale + m;
    let ty = |y: f64| (hi[1] - y) * scale + m;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<!-- selftile {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
        num(width),
        num(height),
        num(width),
        num(height)
    );
    for it in items {
        let v = &it.polyline.vertices;
        if v.is_empty() {
            continue;
        }
        let color = config
            .palette
            .get(it.color % config.palette.len().max(1))
            .map(String::as_str)
            .unwrap_or("#000000");
        let mut d = String::with_capacity(v.len() * 16);
        for (i, p) in v.iter().enumerate() {
            let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, num(tx(p[0])), num(ty(p[1])));
        }
        if it.polyline.closed {
            d.push_str(" Z");
        }
        let fill = if config.fill && it.polyline.closed {
            format!("{color}\" fill-opacity=\"0.35")
        } else {
            "none".to_string()
        };
        let _ = writeln!(
            out,
            "<path d=\"{d}\" fill=\"{fill}\" stroke=\"{color}\" stroke-width=\"{}\" stroke-linejoin=\"round\"/>",
            num(config.stroke_width)
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document() {
        let s = render_svg(&[], &RenderConfig::default());
        assert!(s.contains("<svg"));
        assert!(s.trim_end().ends_with("</svg>"));
        assert_eq!(s.matches("<path").count(), 0);
    }

    #[test]
    fn square_bounds() {
        let sq = Polyline::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], true);
        let cfg = RenderConfig { scale: 50.0, margin: 5.0, ..RenderConfig::default() };
        let s = render_svg(&[SvgItem { polyline: sq.clone(), color: 0 }], &cfg);
        assert_eq!(s.matches("<path").count(), 1);
        assert!(s.contains("width=\"60.000\" height=\"60.000\""));
        // (0,0) is the bottom-left corner
        assert!(s.contains("M5.000 55.000"));
        assert_eq!(s, render_svg(&[SvgItem { polyline: sq, color: 0 }], &cfg));
    }
}
