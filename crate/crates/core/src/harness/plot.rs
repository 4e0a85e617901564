//! Standalone SVG charts: line charts (optionally log-scale y), stem charts
//! and step charts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::experiment::{Comparison, RunResult};
use super::export::{ensure_dir, FrequencyRow, ImpulseRow};
use crate::{Error, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Stem,
    Step,
}

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub color: &'static str,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, color: &'static str, style: Style) -> Self {
        Self {
            label: label.into(),
            color,
            style,
            points: Vec::new(),
        }
    }

    pub fn with_points(mut self, points: impl IntoIterator<Item = (f64, f64)>) -> Self {
        self.points = points.into_iter().collect();
        self
    }

    pub fn from_curve(label: impl Into<String>, color: &'static str, curve: &[f64]) -> Self {
        Self::new(label, color, Style::Line)
            .with_points(curve.iter().enumerate().map(|(i, &v)| (i as f64, v)))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Series>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn value(&self, v: f64) -> f64 {
        if self.log {
            v.log10()
        } else {
            v
        }
    }

    fn frac(&self, v: f64) -> f64 {
        let (lo, hi) = (self.value(self.lo), self.value(self.hi));
        if hi > lo {
            (self.value(v) - lo) / (hi - lo)
        } else {
            0.5
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let a = self.lo.log10().floor() as i32;
            let b = self.hi.log10().ceil() as i32;
            return (a..=b).map(|e| 10f64.powi(e)).collect();
        }
        let span = self.hi - self.lo;
        if span.is_nan() || span <= 0.0 {
            return vec![self.lo];
        }
        let raw = span / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| span / s <= 6.0)
            .unwrap_or(10.0 * mag);
        let first = (self.lo / step).ceil() as i64;
        let last = (self.hi / step).floor() as i64;
        (first..=last).map(|i| i as f64 * step).collect()
    }
}

fn label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.log10().round() as i32)
    } else if v == 0.0 || (v.abs() >= 0.01 && v.abs() < 1e5) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            ..Default::default()
        }
    }

    pub fn log_y(mut self) -> Self {
        self.log_y = true;
        self
    }

    pub fn series(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    fn usable(&self, y: f64) -> bool {
        y.is_finite() && (!self.log_y || y > 0.0)
    }

    fn axes(&self) -> (Axis, Axis) {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for s in &self.series {
            for &(x, y) in &s.points {
                if !x.is_finite() || !self.usable(y) {
                    continue;
                }
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
        }
        if x0 > x1 {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.1, 1.0);
        }
        if self.series.iter().any(|s| s.style == Style::Stem) && !self.log_y {
            y0 = y0.min(0.0);
            y1 = y1.max(0.0);
        }
        if self.log_y {
            y0 = 10f64.powf(y0.log10().floor());
            y1 = 10f64.powf(y1.log10().ceil());
            if y0 == y1 {
                y1 *= 10.0;
            }
        } else {
            let pad = if y1 > y0 { 0.05 * (y1 - y0) } else { 1.0 };
            y0 -= pad;
            y1 += pad;
        }
        if x0 == x1 {
            x0 -= 0.5;
            x1 += 0.5;
        }
        (
            Axis {
                lo: x0,
                hi: x1,
                log: false,
            },
            Axis {
                lo: y0,
                hi: y1,
                log: self.log_y,
            },
        )
    }

    pub fn render(&self) -> String {
        let (xa, ya) = self.axes();
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + xa.frac(x) * pw;
        let py = |y: f64| TOP + (1.0 - ya.frac(y)) * ph;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );

        for t in xa.ticks() {
            let x = px(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#e5e5e5"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP + ph,
                TOP + ph + 16.0,
                label(t, false)
            );
        }
        for t in ya.ticks() {
            let y = py(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e5e5e5"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                y + 4.0,
                label(t, ya.log)
            );
        }
        let _ = writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 18.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        let baseline = py(if ya.log {
            ya.lo
        } else {
            0.0f64.clamp(ya.lo, ya.hi)
        });
        for s in &self.series {
            let pts: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|(x, y)| x.is_finite() && self.usable(*y))
                .map(|&(x, y)| (px(x), py(y)))
                .collect();
            match s.style {
                Style::Line | Style::Step => {
                    let mut path = String::new();
                    for (i, &(x, y)) in pts.iter().enumerate() {
                        if i == 0 {
                            let _ = write!(path, "M{x:.2},{y:.2}");
                        } else if s.style == Style::Step {
                            let _ = write!(path, " H{x:.2} V{y:.2}");
                        } else {
                            let _ = write!(path, " L{x:.2},{y:.2}");
                        }
                    }
                    let _ = writeln!(
                        svg,
                        r#"<path d="{path}" fill="none" stroke="{}" stroke-width="1.2"/>"#,
                        s.color
                    );
                }
                Style::Stem => {
                    for &(x, y) in &pts {
                        let _ = writeln!(
                            svg,
                            r#"<line x1="{x:.2}" y1="{baseline:.2}" x2="{x:.2}" y2="{y:.2}" stroke="{c}" stroke-width="1.5"/><circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="none" stroke="{c}"/>"#,
                            c = s.color
                        );
                    }
                }
            }
        }

        for (i, s) in self.series.iter().enumerate() {
            let y = TOP + 16.0 + 18.0 * i as f64;
            let x = LEFT + pw - 190.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{x:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{y:.2}">{}</text>"#,
                y - 4.0,
                x + 24.0,
                y - 4.0,
                s.color,
                x + 30.0,
                escape(&s.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Learning curves, tap estimates, active-tap count and equalizer squared
/// difference for one run.
pub fn emit_run_plots(r: &RunResult, dir: &Path) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let variant = r.config.variant;
    let mut out = Vec::new();

    let path = dir.join("learning_curve.svg");
    Chart::new(&format!("Learning curve ({variant})"), "iteration", "MSE")
        .log_y()
        .series(Series::from_curve(
            "prediction error (smoothed)",
            "#999999",
            &r.mse_smooth,
        ))
        .series(Series::from_curve(
            "|w - h|^2 (smoothed)",
            "#d62728",
            &r.estimate_error_smooth,
        ))
        .save(&path)?;
    out.push(path);

    let path = dir.join("taps.svg");
    let taps = |c: &crate::channel::DiscreteChannel| {
        c.taps()
            .iter()
            .enumerate()
            .map(|(k, &v)| (k as f64, v))
            .collect::<Vec<_>>()
    };
    Chart::new(&format!("Channel taps ({variant})"), "tap index", "gain")
        .series(Series::new("simulated", "#1f77b4", Style::Stem).with_points(taps(&r.true_channel)))
        .series(
            Series::new("estimated", "#d62728", Style::Stem)
                .with_points(taps(&r.estimate).into_iter().map(|(k, v)| (k + 0.15, v))),
        )
        .save(&path)?;
    out.push(path);

    let path = dir.join("active_count.svg");
    Chart::new(
        &format!("Active tap count ({variant})"),
        "iteration",
        "active taps",
    )
    .series(
        Series::new("active taps", "#2ca02c", Style::Step).with_points(
            r.trajectory
                .active_counts
                .iter()
                .enumerate()
                .map(|(i, &c)| (i as f64, c as f64)),
        ),
    )
    .save(&path)?;
    out.push(path);

    let path = dir.join("equalizer_output.svg");
    Chart::new(
        &format!("Squared difference, channel input vs equalizer output ({variant})"),
        "symbol",
        "squared difference",
    )
    .log_y()
    .series(Series::from_curve(
        "(d - soft)^2",
        "#1f77b4",
        &r.squared_difference,
    ))
    .save(&path)?;
    out.push(path);
    Ok(out)
}

pub fn variant_color(v: super::Variant) -> &'static str {
    match v {
        super::Variant::Plain => "#1f77b4",
        super::Variant::Adg => "#2ca02c",
        super::Variant::AdgTd => "#d62728",
    }
}

/// Mean learning curve of each variant on one log-scale chart.
pub fn emit_comparison_plot(cmp: &Comparison, path: &Path) -> Result<()> {
    let mut chart = Chart::new(
        "Comparison of asymptotic performance",
        "iteration",
        "mean |w - h|^2",
    )
    .log_y();
    for (variant, curve) in &cmp.mean_curves {
        chart = chart.series(Series::from_curve(
            variant.as_str(),
            variant_color(*variant),
            curve,
        ));
    }
    chart.save(path)
}

pub fn emit_channel_plots(
    impulse: &[ImpulseRow],
    frequency: &[FrequencyRow],
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    ensure_dir(dir)?;
    let ir = dir.join("impulse_response.svg");
    Chart::new("Cosine-squared impulse response", "t / T", "h(t)")
        .series(
            Series::new("h", "#1f77b4", Style::Line)
                .with_points(impulse.iter().map(|r| (r.t, r.h))),
        )
        .save(&ir)?;
    let fr = dir.join("frequency_response.svg");
    Chart::new("Baseband frequency response", "f T", "H(f)")
        .series(
            Series::new("H", "#d62728", Style::Line)
                .with_points(frequency.iter().map(|r| (r.f, r.response))),
        )
        .save(&fr)?;
    Ok(vec![ir, fr])
}
