//! File formats: CSV, JSON and SVG writers with matching parsers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = concat!("specrange ", env!("CARGO_PKG_VERSION"));

/// Resolution used to produce a region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub label: String,
    pub value: usize,
}

/// A named point set, usually a closed counterclockwise boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionFile {
    pub name: String,
    pub sigma: Option<f64>,
    pub kind: String,
    pub points: Vec<(f64, f64)>,
    pub grid: Resolution,
    pub tool_version: String,
}

impl RegionFile {
    pub fn new(
        name: impl Into<String>,
        sigma: Option<f64>,
        kind: impl Into<String>,
        points: &[Complex64],
        grid: Resolution,
    ) -> Self {
        RegionFile {
            name: name.into(),
            sigma,
            kind: kind.into(),
            points: points.iter().map(|z| (z.re, z.im)).collect(),
            grid,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn complex_points(&self) -> Vec<Complex64> {
        self.points.iter().map(|&(x, y)| Complex64::new(x, y)).collect()
    }
}

/// One line of an angle sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepLine {
    pub phi: f64,
    pub r_closed: f64,
    pub r_section: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    /// Format implied by a file extension.
    pub fn from_path(path: &Path) -> Option<Format> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            "svg" => Some(Format::Svg),
            _ => None,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_real(s: &str, line: usize) -> CliResult<f64> {
    s.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("line {line}: not a number: {s:?}")))
}

/// Generic CSV table with a header row.
pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&x| fmt_real(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Parses a CSV table whose header must equal `header`.
pub fn parse_table_csv(text: &str, header: &[&str]) -> CliResult<Vec<Vec<f64>>> {
    let mut lines = text.lines().enumerate();
    let expected = header.join(",");
    match lines.next() {
        Some((_, h)) if h.trim() == expected => {}
        other => {
            return Err(CliError::Parse(format!(
                "expected header {expected:?}, found {:?}",
                other.map(|(_, h)| h)
            )))
        }
    }
    lines
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let cells: Vec<&str> = l.split(',').collect();
            if cells.len() != header.len() {
                return Err(CliError::Parse(format!("line {}: expected {} columns", i + 1, header.len())));
            }
            cells.iter().map(|c| parse_real(c, i + 1)).collect()
        })
        .collect()
}

pub fn region_csv(region: &RegionFile) -> String {
    let rows: Vec<Vec<f64>> = region.points.iter().map(|&(x, y)| vec![x, y]).collect();
    table_csv(&["x", "y"], &rows)
}

pub fn parse_region_csv(text: &str) -> CliResult<Vec<(f64, f64)>> {
    Ok(parse_table_csv(text, &["x", "y"])?.into_iter().map(|r| (r[0], r[1])).collect())
}

pub fn region_json(region: &RegionFile) -> CliResult<String> {
    Ok(serde_json::to_string_pretty(region)?)
}

pub fn parse_region_json(text: &str) -> CliResult<RegionFile> {
    Ok(serde_json::from_str(text)?)
}

pub fn sweep_csv(lines: &[SweepLine]) -> String {
    let rows: Vec<Vec<f64>> = lines.iter().map(|l| vec![l.phi, l.r_closed, l.r_section]).collect();
    table_csv(&["phi", "r_closed", "r_section"], &rows)
}

pub fn parse_sweep_csv(text: &str) -> CliResult<Vec<SweepLine>> {
    Ok(parse_table_csv(text, &["phi", "r_closed", "r_section"])?
        .into_iter()
        .map(|r| SweepLine { phi: r[0], r_closed: r[1], r_section: r[2] })
        .collect())
}

/// Drawing style of an SVG layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    pub color: &'static str,
    pub dashed: bool,
    pub closed: bool,
}

/// Overlays the regions as named polyline layers.
pub fn layers_svg(title: &str, layers: &[(RegionFile, Style)]) -> CliResult<String> {
    let pts = layers.iter().flat_map(|(r, _)| r.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return Err(CliError::Usage("nothing to draw".into()));
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (x0, y0, w, h) = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let scale = 800.0 / w.max(h);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.3} {:.3}">"#,
        w * scale,
        h * scale,
        w * scale,
        h * scale
    )
    .expect("string write");
    writeln!(out, "  <title>{title}</title>").expect("string write");
    for (region, style) in layers {
        let coords: Vec<String> = region
            .points
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", (x - x0) * scale, (y0 + h - y) * scale))
            .collect();
        let tag = if style.closed { "polygon" } else { "polyline" };
        let dash = if style.dashed { r#" stroke-dasharray="6,4""# } else { "" };
        writeln!(
            out,
            r#"  <g id="{}"><{tag} fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/></g>"#,
            region.name,
            style.color,
            coords.join(" ")
        )
        .expect("string write");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, contents)?;
    Ok(())
}

/// Serializes a region in the requested format.
pub fn render_region(region: &RegionFile, format: Format) -> CliResult<String> {
    if region.points.is_empty() {
        return Err(CliError::Usage(format!("region {} is empty", region.name)));
    }
    match format {
        Format::Csv => Ok(region_csv(region)),
        Format::Json => region_json(region),
        Format::Svg => layers_svg(&region.name, &[(region.clone(), Style { color: "red", dashed: false, closed: true })]),
    }
}
