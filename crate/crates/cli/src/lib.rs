//! Command-line front end for the `specrange` library.

pub mod args;
pub mod emit;
pub mod error;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::json;

use specrange::fz::{
    b_boundary, five_diagonal_counterexample, five_diagonal_operator, n_phi, nr_of_square_region, nr_region,
    sqrt_boundary, BoundaryKind, FzParams, PiecewiseBoundary,
};
use specrange::operator::{sample_sign_sequence_stream, TridiagSpec};
use specrange::schur::fz_certify_any_angle;
use specrange::sections::{sweep, SectionModel};
use specrange::symbol::{periodic_spectrum_curve, theta_grid, tridiagonal_laurent_curve};

use args::{Cli, Command, FigureArg, FormatArg, KindArg, ModelArg, OperatorArg, Output};
use emit::{
    layers_svg, render_region, sweep_csv, table_csv, write_file, Format, RegionFile, Resolution, Style, SweepLine,
};
pub use error::{CliError, CliResult};

/// Result of a command before serialization.
#[derive(Debug, Clone)]
pub enum Artifact {
    Region(RegionFile),
    Sweep(Vec<SweepLine>),
    Table { header: Vec<&'static str>, rows: Vec<Vec<f64>> },
    Report { text: String, json: serde_json::Value },
    Figure { title: String, layers: Vec<(RegionFile, Style)> },
}

fn res(label: &str, value: usize) -> Resolution {
    Resolution { label: label.into(), value }
}

fn closed(name: &str, sigma: f64, points: &[Complex64], grid: Resolution) -> RegionFile {
    RegionFile::new(name, Some(sigma), "closed-boundary", points, grid)
}

fn curve(name: &str, sigma: f64, points: &[Complex64], grid: Resolution) -> RegionFile {
    RegionFile::new(name, Some(sigma), "curve", points, grid)
}

fn style(color: &'static str, dashed: bool, closed: bool) -> Style {
    Style { color, dashed, closed }
}

/// Boundary of `√N(A²)`, counterclockwise.
pub fn sqrt_region_boundary(params: &FzParams, grid: usize) -> CliResult<Vec<Complex64>> {
    let region = nr_of_square_region(params, grid)?;
    let mut pts = region.boundary_samples(4 * grid);
    pts.extend_from_slice(region.vertices());
    Ok(sqrt_boundary(&pts))
}

fn figure_layers(name: FigureArg, grid: usize) -> CliResult<(String, Vec<(RegionFile, Style)>)> {
    if grid < 2 {
        return Err(CliError::Usage("figure grid needs at least 2 points".into()));
    }
    match name {
        FigureArg::Sigma1 => {
            let sigma = 1.0;
            let params = FzParams::new(sigma)?;
            let nr = nr_region(&params, grid)?;
            let disk: Vec<Complex64> = theta_grid(grid).into_iter().map(|t| Complex64::from_polar(1.0, t)).collect();
            let one = Complex64::new(1.0, 0.0);
            let zero = Complex64::new(0.0, 0.0);
            let plus = tridiagonal_laurent_curve(one, zero, one, grid)?;
            let minus = tridiagonal_laurent_curve(one, zero, -one, grid)?;
            let layers = vec![
                (closed("nr-boundary", sigma, nr.vertices(), res("angles", grid)), style("red", false, true)),
                (
                    closed("sqrt-nr-of-square-boundary", sigma, &sqrt_region_boundary(&params, grid)?, res("angles", grid)),
                    style("blue", false, true),
                ),
                (closed("unit-circle", sigma, &disk, res("angles", grid)), style("black", false, true)),
                (curve("laurent-plus", sigma, &plus.points, res("theta", grid)), style("black", false, true)),
                (curve("laurent-minus", sigma, &minus.points, res("theta", grid)), style("black", false, true)),
            ];
            Ok(("sigma=1".into(), layers))
        }
        FigureArg::Sigma05 => {
            let sigma = 0.5;
            let params = FzParams::new(sigma)?;
            let a = 1.0 + sigma * sigma;
            let w = (1.0 + sigma) * (1.0 + sigma);
            let xs: Vec<f64> = (0..grid).map(|i| -w + 2.0 * w * i as f64 / (grid - 1) as f64).collect();
            let upper: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, a - x * x / (4.0 * a))).collect();
            let lower: Vec<Complex64> = upper.iter().map(|z| z.conj()).collect();
            let ellipse = |j: u8| -> CliResult<Vec<Complex64>> {
                theta_grid(grid).into_iter().map(|t| Ok(b_boundary(j, t, &params)?)).collect()
            };
            let sq = PiecewiseBoundary::new(BoundaryKind::NrSquared, params).closed_curve(grid)?;
            let os = PiecewiseBoundary::new(BoundaryKind::NrOfSquare, params).closed_curve(grid)?;
            let layers = vec![
                (curve("parabola-upper", sigma, &upper, res("x", grid)), style("blue", true, false)),
                (curve("parabola-lower", sigma, &lower, res("x", grid)), style("blue", true, false)),
                (closed("ellipse-b1", sigma, &ellipse(1)?, res("theta", grid)), style("blue", true, true)),
                (closed("ellipse-b3", sigma, &ellipse(3)?, res("theta", grid)), style("blue", true, true)),
                (closed("circle", sigma, &ellipse(2)?, res("theta", grid)), style("red", true, true)),
                (closed("nr-squared", sigma, &sq, res("x", grid)), style("blue", false, true)),
                (closed("nr-of-square", sigma, &os, res("x", grid)), style("red", false, true)),
            ];
            Ok(("sigma=0.5".into(), layers))
        }
    }
}

/// Runs a command and returns its artifact.
pub fn execute(command: &Command) -> CliResult<Artifact> {
    match *command {
        Command::SymbolSpectrum { operator, sigma, grid, .. } => {
            let points = match operator {
                OperatorArg::Fz => {
                    let spec = TridiagSpec::feinberg_zee(sigma)?;
                    let mut pts = Vec::new();
                    for (sup, d, sub) in spec.triples() {
                        pts.extend(tridiagonal_laurent_curve(sup, d, sub, grid)?.points);
                    }
                    pts
                }
                OperatorArg::FiveDiagonal => periodic_spectrum_curve(&five_diagonal_operator(), grid)?.points,
            };
            let sig = (operator == OperatorArg::Fz).then_some(sigma);
            Ok(Artifact::Region(RegionFile::new("symbol-spectrum", sig, "point-cloud", &points, res("theta", grid))))
        }
        Command::Numrange { sigma, angles, .. } => {
            let region = nr_region(&FzParams::new(sigma)?, angles)?;
            Ok(Artifact::Region(closed("numrange", sigma, region.vertices(), res("angles", angles))))
        }
        Command::FzNphi { sigma, angles, .. } => {
            let params = FzParams::new(sigma)?;
            if angles == 0 {
                return Err(CliError::Usage("angles must be positive".into()));
            }
            let rows = theta_grid(angles).into_iter().map(|p| vec![p, n_phi(p, &params)]).collect();
            Ok(Artifact::Table { header: vec!["phi", "n_phi"], rows })
        }
        Command::FzBoundary { sigma, kind, grid, .. } => {
            let kind = match kind {
                KindArg::Nr => BoundaryKind::Nr,
                KindArg::NrSquared => BoundaryKind::NrSquared,
                KindArg::NrOfSquare => BoundaryKind::NrOfSquare,
            };
            let pts = PiecewiseBoundary::new(kind, FzParams::new(sigma)?).closed_curve(grid)?;
            Ok(Artifact::Region(closed(kind.name(), sigma, &pts, res("x", grid))))
        }
        Command::FzSqrtRegion { sigma, grid, .. } => {
            let pts = sqrt_region_boundary(&FzParams::new(sigma)?, grid)?;
            Ok(Artifact::Region(closed("sqrt-nr-of-square", sigma, &pts, res("angles", grid))))
        }
        Command::Certify { sigma, phi, n, trials, seed, .. } => {
            if trials == 0 {
                return Err(CliError::Usage("trials must be at least 1".into()));
            }
            let mut rows = Vec::with_capacity(trials);
            for t in 0..trials as u64 {
                let h = sample_sign_sequence_stream(n, sigma, seed, t)?;
                let rep = fz_certify_any_angle(&h, phi)?;
                let flag = |b: bool| if b { 1.0 } else { 0.0 };
                rows.push(vec![t as f64, flag(rep.certified), rep.max_slack, flag(rep.boundary)]);
            }
            let failed = rows.iter().filter(|r| r[1] == 0.0).count();
            eprintln!("certified {} of {trials} windows (sigma={sigma}, phi={phi}, n={n}, seed={seed})", trials - failed);
            Ok(Artifact::Table { header: vec!["trial", "certified", "max_slack", "boundary"], rows })
        }
        Command::Sections { sigma, model, angles, n, trials, seed, .. } => {
            let model = match model {
                ModelArg::Fz => SectionModel::Tridiag(TridiagSpec::feinberg_zee(sigma)?),
                ModelArg::FzSquared => SectionModel::FzSquared { sigma },
            };
            if angles == 0 {
                return Err(CliError::Usage("angles must be positive".into()));
            }
            let result = sweep(&model, &theta_grid(angles), n, trials, seed)?;
            Ok(Artifact::Sweep(
                result
                    .rows
                    .iter()
                    .map(|r| SweepLine { phi: r.phi, r_closed: r.closed_form, r_section: r.best_section })
                    .collect(),
            ))
        }
        Command::Counterexample5 { .. } => {
            let r = five_diagonal_counterexample()?;
            let text = format!(
                "eigenvalues of b(0): {:.10} {:.10} {:.10}\n\
                 r_pi(A) >= {:.10} {} 9/4 = 2.25\n\
                 r_pi of the 63-section: {:.10}\n\
                 max over theta of the rotated symbol: {:.10}\n\
                 Laurent minima: {:.8} and {:.8}, hull bound {:.8}\n",
                r.b0_eigenvalues[0],
                r.b0_eigenvalues[1],
                r.b0_eigenvalues[2],
                r.r_pi_lower_bound,
                if r.exceeds { ">" } else { "<=" },
                r.r_pi_section,
                r.r_pi_symbol_max,
                r.laurent_c1_min,
                r.laurent_c2_min,
                r.laurent_bound,
            );
            let json = json!({
                "b0_eigenvalues": r.b0_eigenvalues,
                "r_pi_lower_bound": r.r_pi_lower_bound,
                "r_pi_section": r.r_pi_section,
                "r_pi_symbol_max": r.r_pi_symbol_max,
                "laurent_c1_min": r.laurent_c1_min,
                "laurent_c2_min": r.laurent_c2_min,
                "laurent_bound": r.laurent_bound,
                "exceeds": r.exceeds,
                "pi": PI,
            });
            Ok(Artifact::Report { text, json })
        }
        Command::Figure { name, grid, .. } => {
            let (title, layers) = figure_layers(name, grid)?;
            Ok(Artifact::Figure { title, layers })
        }
    }
}

fn output_of(command: &Command) -> &Output {
    match command {
        Command::SymbolSpectrum { output, .. }
        | Command::Numrange { output, .. }
        | Command::FzNphi { output, .. }
        | Command::FzBoundary { output, .. }
        | Command::FzSqrtRegion { output, .. }
        | Command::Certify { output, .. }
        | Command::Sections { output, .. }
        | Command::Counterexample5 { output }
        | Command::Figure { output, .. } => output,
    }
}

fn resolve_format(output: &Output) -> Option<Format> {
    match output.format {
        Some(FormatArg::Csv) => Some(Format::Csv),
        Some(FormatArg::Json) => Some(Format::Json),
        Some(FormatArg::Svg) => Some(Format::Svg),
        None => output.out.as_deref().and_then(Format::from_path),
    }
}

fn unsupported(what: &str, format: Format) -> CliError {
    CliError::Usage(format!("{what} cannot be written as {}", format.extension()))
}

/// Path of one figure layer next to `out`.
pub fn layer_path(out: &Path, layer: &str, format: Format) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "figure".into());
    out.with_file_name(format!("{stem}-{layer}.{}", format.extension()))
}

/// Serializes and writes an artifact; returns the files written.
pub fn emit(artifact: &Artifact, output: &Output) -> CliResult<Vec<PathBuf>> {
    let format = resolve_format(output);
    let text = match artifact {
        Artifact::Region(r) => render_region(r, format.unwrap_or(Format::Csv))?,
        Artifact::Sweep(lines) => match format.unwrap_or(Format::Csv) {
            Format::Csv => sweep_csv(lines),
            Format::Json => serde_json::to_string_pretty(lines)?,
            f => return Err(unsupported("a sweep", f)),
        },
        Artifact::Table { header, rows } => match format.unwrap_or(Format::Csv) {
            Format::Csv => table_csv(header, rows),
            Format::Json => {
                let objs: Vec<serde_json::Map<String, serde_json::Value>> = rows
                    .iter()
                    .map(|r| header.iter().zip(r).map(|(h, v)| (h.to_string(), json!(v))).collect())
                    .collect();
                serde_json::to_string_pretty(&objs)?
            }
            f => return Err(unsupported("a table", f)),
        },
        Artifact::Report { text, json } => match format {
            None => text.clone(),
            Some(Format::Json) => serde_json::to_string_pretty(json)?,
            Some(f) => return Err(unsupported("a report", f)),
        },
        Artifact::Figure { title, layers } => match format.unwrap_or(Format::Svg) {
            Format::Svg => layers_svg(title, layers)?,
            Format::Json => {
                let files: Vec<&RegionFile> = layers.iter().map(|(r, _)| r).collect();
                serde_json::to_string_pretty(&files)?
            }
            Format::Csv => {
                let out = output
                    .out
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("figure --format csv needs --out".into()))?;
                let rendered = layers
                    .iter()
                    .map(|(r, _)| Ok((layer_path(out, &r.name, Format::Csv), render_region(r, Format::Csv)?)))
                    .collect::<CliResult<Vec<_>>>()?;
                for (path, body) in &rendered {
                    write_file(path, body)?;
                }
                return Ok(rendered.into_iter().map(|(p, _)| p).collect());
            }
        },
    };
    match &output.out {
        Some(path) => {
            write_file(path, &text)?;
            Ok(vec![path.clone()])
        }
        None => {
            print!("{text}");
            Ok(Vec::new())
        }
    }
}

/// Runs the parsed command line.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let artifact = execute(&cli.command)?;
    emit(&artifact, output_of(&cli.command))
}

/// Applies `SPECRANGE_THREADS` (0 or unset: automatic).
pub fn configure_threads(value: Option<&str>) -> CliResult<()> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("SPECRANGE_THREADS must be a non-negative integer, got {v:?}")))?;
    if n > 0 {
        // a second initialisation only happens in tests and is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
