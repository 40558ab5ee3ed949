//! JSON and SVG output for [`OusiogramSpec`].

use std::fmt::Write as _;

use super::OusiogramSpec;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Json,
    Svg,
}

pub fn render(spec: &OusiogramSpec, format: RenderFormat) -> Vec<u8> {
    match format {
        RenderFormat::Json => render_json(spec).into_bytes(),
        RenderFormat::Svg => render_svg(spec).into_bytes(),
    }
}

pub fn render_json(spec: &OusiogramSpec) -> String {
    serde_json::to_string_pretty(spec).expect("spec serializes")
}

impl OusiogramSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 760.0;
const LEFT: f64 = 110.0;
const TOP: f64 = 130.0;
const SIZE: f64 = 500.0;
const MARGIN_DEPTH: f64 = 60.0;

struct Frame {
    limit: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x + self.limit) / (2.0 * self.limit) * SIZE
    }

    fn py(&self, y: f64) -> f64 {
        TOP + SIZE - (y + self.limit) / (2.0 * self.limit) * SIZE
    }

    fn scale(&self, d: f64) -> f64 {
        d / (2.0 * self.limit) * SIZE
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn limit_for(spec: &OusiogramSpec) -> f64 {
    let h = &spec.histogram;
    let w = h.bin_width;
    let mut lim: f64 = 1.0;
    lim = lim
        .max(h.origin.0.abs())
        .max(h.origin.1.abs())
        .max((h.origin.0 + h.nx() as f64 * w).abs())
        .max((h.origin.1 + h.ny() as f64 * w).abs());
    if let Some(r) = spec.reference_circle {
        lim = lim.max(r);
    }
    lim
}

/// Standalone SVG 1.1 drawing of the ousiogram.
///
/// Bin darkness is `log(1 + mass) / log(1 + max mass)`.
pub fn render_svg(spec: &OusiogramSpec) -> String {
    let f = Frame { limit: limit_for(spec) };
    let h = &spec.histogram;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // heatmap
    let max = h.max_mass();
    let _ = writeln!(s, r#"<g id="heatmap" stroke="none">"#);
    if max > 0.0 {
        let denom = max.ln_1p();
        let side = f.scale(h.bin_width);
        for (row, line) in h.counts.iter().enumerate() {
            for (col, &m) in line.iter().enumerate() {
                if m <= 0.0 {
                    continue;
                }
                let x0 = h.origin.0 + col as f64 * h.bin_width;
                let y1 = h.origin.1 + (row + 1) as f64 * h.bin_width;
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="black" fill-opacity="{:.4}"/>"#,
                    f.px(x0),
                    f.py(y1),
                    side,
                    side,
                    m.ln_1p() / denom
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    // frame and axes
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{TOP}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#444" stroke-width="1"/>"##
    );
    let _ = writeln!(
        s,
        r##"<g id="axes" stroke="#888" stroke-width="0.6"><line x1="{:.3}" y1="{TOP}" x2="{:.3}" y2="{:.3}"/><line x1="{LEFT}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/></g>"##,
        f.px(0.0),
        f.px(0.0),
        TOP + SIZE,
        f.py(0.0),
        LEFT + SIZE,
        f.py(0.0)
    );

    // ellipse and reference circle
    let e = &spec.ellipse;
    let _ = writeln!(
        s,
        r##"<ellipse id="svd-ellipse" cx="{:.3}" cy="{:.3}" rx="{:.3}" ry="{:.3}" transform="rotate({:.4} {:.3} {:.3})" fill="none" stroke="#c03030" stroke-width="1.2"/>"##,
        f.px(e.center.0),
        f.py(e.center.1),
        f.scale(e.semi_axes.0),
        f.scale(e.semi_axes.1),
        -e.angle.to_degrees(),
        f.px(e.center.0),
        f.py(e.center.1)
    );
    if let Some(r) = spec.reference_circle {
        let _ = writeln!(
            s,
            r##"<circle id="reference-circle" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="#3050c0" stroke-width="1" stroke-dasharray="5,4"/>"##,
            f.px(0.0),
            f.py(0.0),
            f.scale(r)
        );
    }

    marginals(&mut s, spec, &f);
    annotations(&mut s, spec, &f);
    labels(&mut s, spec, &f);

    s.push_str("</svg>\n");
    s
}

fn marginals(s: &mut String, spec: &OusiogramSpec, f: &Frame) {
    let w = spec.histogram.bin_width;
    let side = f.scale(w);
    let peak = |bins: &[(f64, f64)]| bins.iter().map(|b| b.1).fold(0.0, f64::max);

    let mx = &spec.marginal_x;
    let px = peak(&mx.bins);
    let base = TOP - 10.0;
    let _ = writeln!(s, r##"<g id="marginal-x" fill="#777">"##);
    for &(c, m) in &mx.bins {
        if m <= 0.0 || px <= 0.0 {
            continue;
        }
        let hgt = m / px * MARGIN_DEPTH;
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            f.px(c - w / 2.0),
            base - hgt,
            side,
            hgt
        );
    }
    let t = f.px(mx.median);
    let _ = writeln!(
        s,
        r#"<polygon class="median" fill="black" points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}"/>"#,
        t - 5.0,
        base + 2.0,
        t + 5.0,
        base + 2.0,
        t,
        base + 10.0
    );
    let _ = writeln!(s, "</g>");

    let my = &spec.marginal_y;
    let py = peak(&my.bins);
    let base = LEFT + SIZE + 10.0;
    let _ = writeln!(s, r##"<g id="marginal-y" fill="#777">"##);
    for &(c, m) in &my.bins {
        if m <= 0.0 || py <= 0.0 {
            continue;
        }
        let len = m / py * MARGIN_DEPTH;
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
            base,
            f.py(c + w / 2.0),
            len,
            side
        );
    }
    let t = f.py(my.median);
    let _ = writeln!(
        s,
        r#"<polygon class="median" fill="black" points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3}"/>"#,
        base - 2.0,
        t - 5.0,
        base - 2.0,
        t + 5.0,
        base - 10.0,
        t
    );
    let _ = writeln!(s, "</g>");
}

fn annotations(s: &mut String, spec: &OusiogramSpec, f: &Frame) {
    let a = &spec.annotations;
    let _ = writeln!(s, r##"<g id="boundary-annotations" font-size="9" fill="#222">"##);
    for b in &a.boundary {
        let (x, y) = (f.px(b.position.0), f.py(b.position.1));
        let (lx, ly) = (x + 14.0 * b.normal.0, y - 14.0 * b.normal.1);
        let anchor = if b.normal.0 > 0.2 {
            "start"
        } else if b.normal.0 < -0.2 {
            "end"
        } else {
            "middle"
        };
        let _ = writeln!(
            s,
            r##"<line x1="{x:.3}" y1="{y:.3}" x2="{lx:.3}" y2="{ly:.3}" stroke="#999" stroke-width="0.5"/><text x="{lx:.3}" y="{ly:.3}" text-anchor="{anchor}">{}</text>"##,
            escape(b.term.as_str())
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r##"<g id="internal-annotations" font-size="8" fill="#1a4a8a">"##);
    for i in &a.internal {
        let (x, y) = (f.px(i.position.0), f.py(i.position.1));
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="1.5"/><text x="{:.3}" y="{:.3}">{}</text>"#,
            x + 3.0,
            y - 3.0,
            escape(i.term.as_str())
        );
    }
    let _ = writeln!(s, "</g>");
}

fn labels(s: &mut String, spec: &OusiogramSpec, _f: &Frame) {
    let l = &spec.axis_labels;
    let h = &spec.histogram;
    let mid_x = LEFT + SIZE / 2.0;
    let mid_y = TOP + SIZE / 2.0;
    let bottom = TOP + SIZE;
    let right = LEFT + SIZE;
    let _ = writeln!(s, r##"<g id="axis-labels" font-size="12" fill="#000">"##);
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#,
        LEFT - 6.0,
        mid_y + 4.0,
        escape(&l.x.0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="start">{}</text>"#,
        right + MARGIN_DEPTH + 16.0,
        mid_y + 4.0,
        escape(&l.x.1)
    );
    let _ = writeln!(
        s,
        r#"<text x="{mid_x:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
        bottom + 22.0,
        escape(&l.y.0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{mid_x:.3}" y="{:.3}" text-anchor="middle">{}</text>"#,
        TOP - MARGIN_DEPTH - 24.0,
        escape(&l.y.1)
    );
    for (k, (x, y, anchor)) in [
        (1u8, (right + 4.0, TOP - 4.0, "start")),
        (3, (LEFT - 4.0, TOP - 4.0, "end")),
        (5, (LEFT - 4.0, bottom + 14.0, "end")),
        (7, (right + 4.0, bottom + 14.0, "start")),
    ] {
        let _ = writeln!(
            s,
            r##"<text x="{x:.3}" y="{y:.3}" text-anchor="{anchor}" font-size="10" fill="#555">{}</text>"##,
            escape(&l.direction_label(k))
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{mid_x:.3}" y="{:.3}" text-anchor="middle" font-size="14">{}</text>"#,
        bottom + 44.0,
        escape(&h.dim_x)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{mid_y:.3}" text-anchor="middle" font-size="14" transform="rotate(-90 {:.3} {mid_y:.3})">{}</text>"#,
        LEFT - 70.0,
        LEFT - 70.0,
        escape(&h.dim_y)
    );
    let _ = writeln!(s, "</g>");
}
