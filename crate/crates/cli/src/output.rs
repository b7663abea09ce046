//! Artifact writers: CSV rows, JSON summaries with sorted keys, SVG plots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde_json::Value;

/// Output directory of one subcommand.
pub struct Artifacts {
    dir: PathBuf,
}

impl Artifacts {
    pub fn new(root: &Path, name: &str) -> Result<Self> {
        let dir = root.join(name);
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self { dir })
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.dir.join(file)
    }

    /// Writes `header` and `rows` as RFC 4180 CSV.
    pub fn csv(&self, file: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.path(file);
        let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `value` as pretty JSON; object keys come out sorted.
    pub fn json(&self, file: &str, value: &Value) -> Result<()> {
        let path = self.path(file);
        let text = serde_json::to_string_pretty(value)? + "\n";
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn svg(&self, file: &str, plot: &Plot) -> Result<()> {
        let path = self.path(file);
        fs::write(&path, plot.render()).with_context(|| format!("writing {}", path.display()))
    }
}

/// Shortest round-trip formatting, with exponents for very small or large values.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw as a step function (ECDF) instead of a polyline.
    pub step: bool,
}

impl Series {
    /// ECDF of a sample, thinned to at most 400 steps.
    pub fn ecdf(label: impl Into<String>, sorted: &[f64]) -> Self {
        let n = sorted.len();
        let stride = n.div_ceil(400).max(1);
        let mut points: Vec<(f64, f64)> = (0..n)
            .step_by(stride)
            .map(|i| (sorted[i], (i + 1) as f64 / n as f64))
            .collect();
        if let Some(&last) = sorted.last() {
            points.push((last, 1.0));
        }
        Self {
            label: label.into(),
            points,
            step: true,
        }
    }

    pub fn curve(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
            step: false,
        }
    }
}

/// A minimal line chart with axes and a legend.
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

impl Plot {
    pub fn render(&self) -> String {
        let (w, h) = (720.0, 440.0);
        let (l, r, t, b) = (70.0, 170.0, 40.0, 50.0);
        let tx = |x: f64| if self.log_x { x.max(1e-300).log10() } else { x };
        let pts = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.0.is_finite() && p.1.is_finite());
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            x0 = x0.min(tx(x));
            x1 = x1.max(tx(x));
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !(x0 < x1) {
            x1 = x0 + 1.0;
        }
        if !(y0 < y1) {
            y1 = y0 + 1.0;
        }
        let sx = |x: f64| l + (tx(x) - x0) / (x1 - x0) * (w - l - r);
        let sy = |y: f64| h - b - (y - y0) / (y1 - y0) * (h - t - b);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="22" font-size="14">{}</text>"#, l, escape(&self.title));
        let _ = writeln!(
            s,
            r#"<path d="M{l} {t} V{} H{}" fill="none" stroke="black"/>"#,
            h - b,
            w - r
        );
        for k in 0..=4 {
            let fx = x0 + (x1 - x0) * k as f64 / 4.0;
            let fy = y0 + (y1 - y0) * k as f64 / 4.0;
            let px = l + (w - l - r) * k as f64 / 4.0;
            let py = h - b - (h - t - b) * k as f64 / 4.0;
            let xl = if self.log_x { format!("1e{fx:.1}") } else { format!("{fx:.3}") };
            let _ = writeln!(s, r#"<text x="{px}" y="{}" text-anchor="middle">{xl}</text>"#, h - b + 16.0);
            let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{fy:.3}</text>"#, l - 6.0, py + 4.0);
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (l + w - r) / 2.0,
            h - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" transform="rotate(-90 16 {})" text-anchor="middle">{}</text>"#,
            (t + h - b) / 2.0,
            (t + h - b) / 2.0,
            escape(&self.y_label)
        );
        for (i, series) in self.series.iter().enumerate() {
            let color = COLORS[i % COLORS.len()];
            let mut d = String::new();
            let mut prev: Option<(f64, f64)> = None;
            for &(x, y) in series.points.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
                let (px, py) = (sx(x), sy(y));
                match prev {
                    None => {
                        let _ = write!(d, "M{px:.2} {py:.2}");
                    }
                    Some(_) if series.step => {
                        let _ = write!(d, " H{px:.2} V{py:.2}");
                    }
                    Some(_) => {
                        let _ = write!(d, " L{px:.2} {py:.2}");
                    }
                }
                prev = Some((px, py));
            }
            let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
            let ly = t + 14.0 + 18.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                w - r + 10.0,
                w - r + 30.0,
                w - r + 36.0,
                ly + 4.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 2.220446049250313e-16, 1e300, -3.5, 1.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(2.220446049250313e-16), "2.220446049250313e-16");
    }

    #[test]
    fn ecdf_series_ends_at_one_and_is_thinned() {
        let xs: Vec<f64> = (0..10_000).map(|i| i as f64).collect();
        let s = Series::ecdf("x", &xs);
        assert!(s.points.len() <= 402);
        assert_eq!(s.points.last().unwrap().1, 1.0);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let p = Plot {
            title: "a < b".into(),
            x_label: "x".into(),
            y_label: "F".into(),
            log_x: true,
            series: vec![Series::curve("c", vec![(10.0, 0.1), (1000.0, 0.3)])],
        };
        let s = p.render();
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("a &lt; b"));
    }
}
