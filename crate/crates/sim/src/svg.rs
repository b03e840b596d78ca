//! Deterministic SVG charts by direct text generation. Every coordinate is
//! printed with fixed precision, so equal input gives byte-identical output.

use std::fmt::Write;

use crate::error::ChartError;

pub const PALETTE: [&str; 8] = [
    "#1f4e9c", "#c8312b", "#2a8c3c", "#e08a13", "#7b4fa6", "#8a5a44", "#d45a9e", "#168f99",
];

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 64.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: usize,
    pub dashed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub value_label: String,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// `values[ix * ys.len() + iy]`
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BarChart {
    pub title: String,
    pub y_label: String,
    pub bars: Vec<(String, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Data range padded so that a single value still spans a visible interval.
fn span(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
            (l.min(v), h.max(v))
        });
    if lo > hi {
        return None;
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

/// Step from {1, 2, 5}·10^k giving roughly `target` intervals.
fn tick_step(lo: f64, hi: f64, target: f64) -> f64 {
    let raw = (hi - lo) / target;
    let mag = 10f64.powf(raw.log10().floor());
    let r = raw / mag;
    let m = if r < 1.5 {
        1.0
    } else if r < 3.5 {
        2.0
    } else if r < 7.5 {
        5.0
    } else {
        10.0
    };
    m * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let step = tick_step(lo, hi, 5.0);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    // slack so that end points landing on a tick survive rounding
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), decimals)
}

fn fmt_tick(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    // avoid "-0" and "-0.00"
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="13">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text x="{:.2}" y="26" text-anchor="middle" font-size="15">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );
}

/// Frame, ticks and axis labels. `x_ticks` false leaves the x axis bare.
fn axes(out: &mut String, f: &Frame, x_label: &str, y_label: &str, x_ticks: bool) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, TOP, HEIGHT - BOTTOM);
    let _ = writeln!(
        out,
        r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    if x_ticks {
        let (xt, xd) = ticks(f.x.0, f.x.1);
        for t in xt {
            let p = f.px(t);
            let _ = writeln!(
                out,
                r#"<line x1="{p:.2}" y1="{y1:.2}" x2="{p:.2}" y2="{:.2}" stroke="black"/><text x="{p:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y1 + 5.0,
                y1 + 20.0,
                fmt_tick(t, xd)
            );
        }
    }
    let (yt, yd) = ticks(f.y.0, f.y.1);
    for t in yt {
        let p = f.py(t);
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{p:.2}" x2="{x0:.2}" y2="{p:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            p + 4.0,
            fmt_tick(t, yd)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(x_label)
    );
    let (cx, cy) = (22.0, (y0 + y1) / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{cx:.2}" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 {cx:.2} {cy:.2})">{}</text>"#,
        escape(y_label)
    );
}

impl LineChart {
    pub fn render(&self) -> Result<String, ChartError> {
        let all = || self.series.iter().flat_map(|s| s.points.iter());
        if all().next().is_none() {
            return Err(ChartError::Empty(self.title.clone()));
        }
        let frame = Frame {
            x: span(all().map(|p| p.0)).ok_or_else(|| ChartError::Empty(self.title.clone()))?,
            y: span(all().map(|p| p.1)).ok_or_else(|| ChartError::Empty(self.title.clone()))?,
        };
        let mut out = String::new();
        open(&mut out, &self.title);
        axes(&mut out, &frame, &self.x_label, &self.y_label, true);
        if frame.y.0 < 0.0 && frame.y.1 > 0.0 {
            let p = frame.py(0.0);
            let _ = writeln!(
                out,
                r##"<line x1="{LEFT:.2}" y1="{p:.2}" x2="{:.2}" y2="{p:.2}" stroke="#999999" stroke-dasharray="2 3"/>"##,
                WIDTH - RIGHT
            );
        }
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[s.color % PALETTE.len()];
            let dash = if s.dashed {
                r#" stroke-dasharray="7 4""#
            } else {
                ""
            };
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|p| p.0.is_finite() && p.1.is_finite())
                .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
                .collect();
            if pts.len() > 1 {
                let _ = writeln!(
                    out,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.8"{dash} points="{}"/>"#,
                    pts.join(" ")
                );
            }
            for p in &pts {
                let (x, y) = p.split_once(',').expect("formatted pair");
                let _ = writeln!(
                    out,
                    r#"<circle class="marker" cx="{x}" cy="{y}" r="1.6" fill="{color}"/>"#
                );
            }
            let ly = TOP + 12.0 + 20.0 * k as f64;
            let lx = WIDTH - RIGHT + 12.0;
            let _ = writeln!(
                out,
                r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="1.8"{dash}/><text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 24.0,
                lx + 30.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        Ok(out)
    }
}

/// Piecewise-linear blue-to-yellow colour ramp on [0, 1].
fn ramp(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let t = t.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (t.floor() as usize).min(STOPS.len() - 2);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |p: f64, q: f64| (p + (q - p) * f).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

/// Cell edges around grid nodes.
fn edges(v: &[f64]) -> Vec<f64> {
    if v.len() == 1 {
        return vec![v[0] - 0.5, v[0] + 0.5];
    }
    let mut e = Vec::with_capacity(v.len() + 1);
    e.push(v[0] - (v[1] - v[0]) / 2.0);
    e.extend(v.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    e.push(v[v.len() - 1] + (v[v.len() - 1] - v[v.len() - 2]) / 2.0);
    e
}

impl Heatmap {
    pub fn render(&self) -> Result<String, ChartError> {
        if self.xs.is_empty()
            || self.ys.is_empty()
            || self.values.len() != self.xs.len() * self.ys.len()
        {
            return Err(ChartError::Empty(self.title.clone()));
        }
        let (ex, ey) = (edges(&self.xs), edges(&self.ys));
        let frame = Frame {
            x: (ex[0].min(ex[ex.len() - 1]), ex[0].max(ex[ex.len() - 1])),
            y: (ey[0].min(ey[ey.len() - 1]), ey[0].max(ey[ey.len() - 1])),
        };
        let (vlo, vhi) = span(self.values.iter().copied())
            .ok_or_else(|| ChartError::Empty(self.title.clone()))?;
        let mut out = String::new();
        open(&mut out, &self.title);
        let ny = self.ys.len();
        for (k, &v) in self.values.iter().enumerate() {
            let (i, j) = (k / ny, k % ny);
            let (xa, xb) = (frame.px(ex[i]), frame.px(ex[i + 1]));
            let (ya, yb) = (frame.py(ey[j]), frame.py(ey[j + 1]));
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}" shape-rendering="crispEdges"/>"#,
                xa.min(xb),
                ya.min(yb),
                (xb - xa).abs(),
                (yb - ya).abs(),
                ramp((v - vlo) / (vhi - vlo))
            );
        }
        axes(&mut out, &frame, &self.x_label, &self.y_label, true);
        // colour bar
        let (bx, bw, bh) = (WIDTH - RIGHT + 24.0, 18.0, HEIGHT - TOP - BOTTOM);
        for s in 0..50 {
            let y = TOP + bh * (1.0 - (s + 1) as f64 / 50.0);
            let _ = writeln!(
                out,
                r#"<rect x="{bx:.2}" y="{y:.2}" width="{bw:.2}" height="{:.2}" fill="{}"/>"#,
                bh / 50.0 + 0.5,
                ramp((s as f64 + 0.5) / 50.0)
            );
        }
        let bar = Frame {
            x: (0.0, 1.0),
            y: (vlo, vhi),
        };
        let (vt, vd) = ticks(vlo, vhi);
        for t in vt {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                bx + bw + 6.0,
                bar.py(t) + 4.0,
                fmt_tick(t, vd)
            );
        }
        let (cx, cy) = (WIDTH - 28.0, TOP + bh / 2.0);
        let _ = writeln!(
            out,
            r#"<text x="{cx:.2}" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 {cx:.2} {cy:.2})">{}</text>"#,
            escape(&self.value_label)
        );
        out.push_str("</svg>\n");
        Ok(out)
    }
}

impl BarChart {
    pub fn render(&self) -> Result<String, ChartError> {
        if self.bars.is_empty() {
            return Err(ChartError::Empty(self.title.clone()));
        }
        let top = self
            .bars
            .iter()
            .map(|b| b.1)
            .filter(|v| v.is_finite())
            .fold(0.0f64, f64::max);
        let bottom = self
            .bars
            .iter()
            .map(|b| b.1)
            .filter(|v| v.is_finite())
            .fold(0.0f64, f64::min);
        let frame = Frame {
            x: (0.0, self.bars.len() as f64),
            y: if top > bottom {
                (bottom, top * 1.08)
            } else {
                (0.0, 1.0)
            },
        };
        let mut out = String::new();
        open(&mut out, &self.title);
        for (i, (label, v)) in self.bars.iter().enumerate() {
            let (xa, xb) = (frame.px(i as f64 + 0.15), frame.px(i as f64 + 0.85));
            let (ya, yb) = (frame.py(0.0), frame.py(*v));
            let _ = writeln!(
                out,
                r#"<rect class="marker" x="{xa:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                ya.min(yb),
                xb - xa,
                (ya - yb).abs(),
                PALETTE[0]
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text><text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="11">{v:.3}</text>"#,
                (xa + xb) / 2.0,
                HEIGHT - BOTTOM + 20.0,
                escape(label),
                (xa + xb) / 2.0,
                ya.min(yb) - 4.0
            );
        }
        axes(&mut out, &frame, "", &self.y_label, false);
        out.push_str("</svg>\n");
        Ok(out)
    }
}
