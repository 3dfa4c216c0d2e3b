//! Minimal native SVG line plots: axes, ticks, polylines, shaded bands.

use std::fmt::Write as _;

pub const RED: &str = "#d62728";
pub const YELLOW: &str = "#e6b800";
pub const GREEN: &str = "#2ca02c";
pub const GREY: &str = "#7f7f7f";
pub const BLUE: &str = "#1f77b4";
pub const BROWNS: [&str; 5] = ["#8c564b", "#a0522d", "#6b3e26", "#c49c94", "#5c3317"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub dashed: bool,
    pub markers: bool,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, color: &str, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            color: color.to_string(),
            dashed: false,
            markers: true,
            points,
        }
    }

    pub fn dashed(mut self) -> Self {
        self.dashed = true;
        self
    }

    pub fn plain(mut self) -> Self {
        self.markers = false;
        self
    }
}

/// Filled polygon in data coordinates.
#[derive(Debug, Clone)]
pub struct Area {
    pub polygon: Vec<(f64, f64)>,
    pub color: String,
}

/// Vertical background band over `[x0, x1]`.
#[derive(Debug, Clone)]
pub struct Band {
    pub x0: f64,
    pub x1: f64,
    pub color: String,
}

#[derive(Debug, Clone)]
pub struct Panel {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
    pub y_range: Option<(f64, f64)>,
    pub series: Vec<Series>,
    pub bands: Vec<Band>,
    pub areas: Vec<Area>,
    /// Marked reference positions on the x axis.
    pub x_marks: Vec<(f64, String)>,
    pub legend: bool,
}

impl Panel {
    pub fn new(
        title: impl Into<String>,
        x_label: impl Into<String>,
        y_label: impl Into<String>,
    ) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_scale: Scale::Linear,
            y_scale: Scale::Linear,
            y_range: None,
            series: Vec::new(),
            bands: Vec::new(),
            areas: Vec::new(),
            x_marks: Vec::new(),
            legend: true,
        }
    }

    fn usable(&self, v: f64, scale: Scale) -> bool {
        v.is_finite() && (scale == Scale::Linear || v > 0.0)
    }

    fn extent(&self) -> ((f64, f64), (f64, f64)) {
        let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
        let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for &(x, y) in &s.points {
                if self.usable(x, self.x_scale) {
                    xs = (xs.0.min(x), xs.1.max(x));
                }
                if self.usable(y, self.y_scale) {
                    ys = (ys.0.min(y), ys.1.max(y));
                }
            }
        }
        for b in &self.bands {
            xs = (xs.0.min(b.x0), xs.1.max(b.x1));
        }
        if !xs.0.is_finite() {
            xs = (0.0, 1.0);
        }
        if !ys.0.is_finite() {
            ys = (0.0, 1.0);
        }
        if let Some(r) = self.y_range {
            ys = r;
        }
        if xs.1 <= xs.0 {
            xs.1 = xs.0 + 1.0;
        }
        if ys.1 <= ys.0 {
            ys = if self.y_scale == Scale::Log {
                (ys.0 / 10.0, ys.0 * 10.0)
            } else {
                (ys.0 - 0.5, ys.0 + 0.5)
            };
        }
        (xs, ys)
    }
}

fn fwd(v: f64, s: Scale) -> f64 {
    match s {
        Scale::Linear => v,
        Scale::Log => v.log10(),
    }
}

fn ticks(lo: f64, hi: f64, scale: Scale) -> Vec<f64> {
    match scale {
        Scale::Log => {
            let (a, b) = (lo.log10().floor() as i32, hi.log10().ceil() as i32);
            (a..=b)
                .map(|e| 10f64.powi(e))
                .filter(|&t| t >= lo * 0.999 && t <= hi * 1.001)
                .collect()
        }
        Scale::Linear => {
            let span = hi - lo;
            let raw = span / 5.0;
            let mag = 10f64.powf(raw.log10().floor());
            let step = [1.0, 2.0, 5.0, 10.0]
                .iter()
                .map(|m| m * mag)
                .find(|&s| s >= raw)
                .unwrap_or(mag * 10.0);
            let mut t = (lo / step).ceil() * step;
            let mut out = Vec::new();
            while t <= hi + step * 1e-9 {
                out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
                t += step;
            }
            out
        }
    }
}

fn fmt_tick(v: f64, scale: Scale) -> String {
    if scale == Scale::Log {
        return format!("1e{}", v.log10().round() as i32);
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

const PANEL_W: f64 = 520.0;
const PANEL_H: f64 = 340.0;
const ML: f64 = 62.0;
const MR: f64 = 16.0;
const MT: f64 = 30.0;
const MB: f64 = 46.0;

fn render_panel(out: &mut String, p: &Panel, ox: f64, oy: f64, w: f64, h: f64) {
    let ((x0, x1), (y0, y1)) = p.extent();
    let (fx0, fx1) = (fwd(x0, p.x_scale), fwd(x1, p.x_scale));
    let (fy0, fy1) = (fwd(y0, p.y_scale), fwd(y1, p.y_scale));
    let pw = w - ML - MR;
    let ph = h - MT - MB;
    let sx = |x: f64| ox + ML + (fwd(x, p.x_scale) - fx0) / (fx1 - fx0) * pw;
    let sy = |y: f64| oy + MT + ph - (fwd(y, p.y_scale) - fy0) / (fy1 - fy0) * ph;
    let clip_y = |y: f64| y.clamp(oy + MT, oy + MT + ph);

    for b in &p.bands {
        let (a, c) = (sx(b.x0.max(x0)), sx(b.x1.min(x1)));
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" fill-opacity="0.15"/>"#,
            a,
            oy + MT,
            (c - a).max(0.0),
            ph,
            b.color
        );
    }
    for a in &p.areas {
        let pts: Vec<String> = a
            .polygon
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x.clamp(x0, x1)), clip_y(sy(y))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{}" fill-opacity="0.2" stroke="none"/>"#,
            pts.join(" "),
            a.color
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        ox + ML,
        oy + MT,
        pw,
        ph
    );
    for t in ticks(x0, x1, p.x_scale) {
        let x = sx(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#,
            oy + MT + ph,
            oy + MT + ph + 5.0,
            oy + MT + ph + 18.0,
            fmt_tick(t, p.x_scale)
        );
    }
    for t in ticks(y0, y1, p.y_scale) {
        let y = sy(t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{}</text>"#,
            ox + ML - 5.0,
            ox + ML,
            ox + ML - 8.0,
            y + 4.0,
            fmt_tick(t, p.y_scale)
        );
    }
    for (x, label) in &p.x_marks {
        if *x < x0 || *x > x1 {
            continue;
        }
        let xx = sx(*x);
        let _ = writeln!(
            out,
            r#"<line x1="{xx:.2}" y1="{:.2}" x2="{xx:.2}" y2="{:.2}" stroke="red" stroke-width="2"/><text x="{xx:.2}" y="{:.2}" font-size="10" fill="red" text-anchor="middle">{}</text>"#,
            oy + MT + ph,
            oy + MT + ph - 12.0,
            oy + MT + ph - 15.0,
            esc(label)
        );
    }
    for s in &p.series {
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .copied()
            .filter(|&(x, y)| p.usable(x, p.x_scale) && p.usable(y, p.y_scale))
            .map(|(x, y)| (sx(x), clip_y(sy(y))))
            .collect();
        if pts.is_empty() {
            continue;
        }
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let dash = if s.dashed {
            r#" stroke-dasharray="5,3""#
        } else {
            ""
        };
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.6"{dash}/>"#,
            path.join(" "),
            s.color
        );
        if s.markers && pts.len() <= 200 {
            for (x, y) in &pts {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="{}"/>"#,
                    s.color
                );
            }
        }
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="13" text-anchor="middle">{}</text>"#,
        ox + ML + pw / 2.0,
        oy + 18.0,
        esc(&p.title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"#,
        ox + ML + pw / 2.0,
        oy + h - 8.0,
        esc(&p.x_label)
    );
    let (lx, ly) = (ox + 14.0, oy + MT + ph / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{lx:.2}" y="{ly:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 {lx:.2} {ly:.2})">{}</text>"#,
        esc(&p.y_label)
    );
    if p.legend {
        let mut y = oy + MT + 12.0;
        for s in p.series.iter().filter(|s| !s.label.is_empty()) {
            let x = ox + ML + pw - 120.0;
            let dash = if s.dashed {
                r#" stroke-dasharray="5,3""#
            } else {
                ""
            };
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"{dash}/><text x="{:.2}" y="{:.2}" font-size="11">{}</text>"#,
                x + 18.0,
                s.color,
                x + 22.0,
                y + 4.0,
                esc(&s.label)
            );
            y += 14.0;
        }
    }
}

/// Lays panels out on a grid with `cols` columns.
pub fn render(panels: &[Panel], cols: usize, scale: f64) -> String {
    let cols = cols.max(1);
    let rows = panels.len().div_ceil(cols).max(1);
    let (w, h) = (PANEL_W * scale, PANEL_H * scale);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}" font-family="sans-serif">"#,
        w * cols as f64,
        h * rows as f64,
        w * cols as f64,
        h * rows as f64
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        render_panel(
            &mut out,
            p,
            (i % cols) as f64 * w,
            (i / cols) as f64 * h,
            w,
            h,
        );
    }
    out.push_str("</svg>\n");
    out
}
