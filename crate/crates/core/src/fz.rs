//! Closed-form geometry of the random hopping (Feinberg-Zee) operator.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SpecError};
use crate::geometry::{ConvexRegion, PointCloud};
use crate::linalg::{complex_eigenvalues, DEFAULT_EIG_TOL};
use crate::numrange::{numerical_abscissa_section, pe_numrange, DEFAULT_BISECTION_TOL};
use crate::operator::{check_sigma, PeriodicBandOperator, TridiagSpec};
use crate::symbol::{periodic_spectrum_curve, periodic_symbol_matrix, theta_grid};

/// Hopping strength σ and the switching angle `φ* = arccos(σ/(1+σ²))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FzParams {
    pub sigma: f64,
    pub phi_star: f64,
}

impl FzParams {
    pub fn new(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(FzParams { sigma, phi_star: (sigma / (1.0 + sigma * sigma)).acos() })
    }
}

fn ellipse_root(phi: f64, s: f64) -> f64 {
    let (sn, cs) = phi.sin_cos();
    ((1.0 + s * s).powi(2) * cs * cs + (1.0 - s * s).powi(2) * sn * sn).sqrt()
}

/// Support function `N(φ)` of the numerical range of `A²`.
pub fn n_phi(phi: f64, params: &FzParams) -> f64 {
    let s = params.sigma;
    let ps = params.phi_star;
    let p = phi.rem_euclid(2.0 * PI);
    let w = 2.0 * s * p.cos();
    if p <= ps || p >= 2.0 * PI - ps {
        w + ellipse_root(p, s)
    } else if p < PI - ps || p > PI + ps {
        1.0 + s * s
    } else {
        -w + ellipse_root(p, s)
    }
}

/// Support function of the square of the 4-periodic operator `B_j`.
pub fn b_support(j: u8, phi: f64, params: &FzParams) -> Result<f64> {
    let s = params.sigma;
    match j {
        1 => Ok(2.0 * s * phi.cos() + ellipse_root(phi, s)),
        2 => Ok(1.0 + s * s),
        3 => Ok(-2.0 * s * phi.cos() + ellipse_root(phi, s)),
        _ => Err(SpecError::domain(format!("index {j} is not 1, 2 or 3"))),
    }
}

/// Boundary of the numerical range of `B_j²` at parameter `t`.
pub fn b_boundary(j: u8, t: f64, params: &FzParams) -> Result<Complex64> {
    let s = params.sigma;
    let (a, b) = (1.0 + s * s, 1.0 - s * s);
    match j {
        1 => Ok(Complex64::new(2.0 * s + a * t.cos(), b * t.sin())),
        2 => Ok(Complex64::from_polar(a, t)),
        3 => Ok(Complex64::new(-2.0 * s + a * t.cos(), b * t.sin())),
        _ => Err(SpecError::domain(format!("index {j} is not 1, 2 or 3"))),
    }
}

/// Which closed-form boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryKind {
    /// `N(A)`
    Nr,
    /// `N(A)²`
    NrSquared,
    /// `N(A²)`
    NrOfSquare,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Nr => "NR",
            BoundaryKind::NrSquared => "NR_SQUARED",
            BoundaryKind::NrOfSquare => "NR_OF_SQUARE",
        }
    }
}

fn half_ellipse(u: f64) -> f64 {
    (1.0 - u * u).max(0.0).sqrt()
}

/// Upper boundary of a symmetric convex region as a piecewise function of `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseBoundary {
    pub kind: BoundaryKind,
    pub params: FzParams,
    /// Sorted breakpoints in `[0, half_width]`.
    pub breakpoints: Vec<f64>,
    pub half_width: f64,
}

impl PiecewiseBoundary {
    pub fn new(kind: BoundaryKind, params: FzParams) -> Self {
        let s = params.sigma;
        let (breakpoints, half_width) = match kind {
            BoundaryKind::Nr => {
                let r = (2.0 * (1.0 + s * s)).sqrt();
                (vec![(1.0 - s).powi(2) / r, (1.0 + s).powi(2) / r], 1.0 + s)
            }
            BoundaryKind::NrSquared => (vec![4.0 * s], (1.0 + s).powi(2)),
            BoundaryKind::NrOfSquare => (
                vec![s, 2.0 * s + s * (1.0 + s * s).powi(2) / (1.0 + s.powi(4))],
                (1.0 + s).powi(2),
            ),
        };
        PiecewiseBoundary { kind, params, breakpoints, half_width }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x.abs() <= self.half_width * (1.0 + 1e-15)) {
            return Err(SpecError::domain(format!(
                "x = {x} outside [-{w}, {w}]",
                w = self.half_width
            )));
        }
        let s = self.params.sigma;
        let ax = x.abs().min(self.half_width);
        let y = match self.kind {
            BoundaryKind::Nr => {
                let (x1, x2) = (self.breakpoints[0], self.breakpoints[1]);
                if ax < x1 {
                    (1.0 + s) * half_ellipse(ax / (1.0 - s))
                } else if ax < x2 {
                    (2.0 * (1.0 + s * s)).sqrt() - ax
                } else {
                    (1.0 - s) * half_ellipse(ax / (1.0 + s))
                }
            }
            BoundaryKind::NrSquared => {
                let a = 1.0 + s * s;
                if ax <= 4.0 * s {
                    a - ax * ax / (4.0 * a)
                } else {
                    (1.0 - s * s) * half_ellipse((ax - 2.0 * s) / a)
                }
            }
            BoundaryKind::NrOfSquare => {
                let a = 1.0 + s * s;
                let (x1, x2) = (self.breakpoints[0], self.breakpoints[1]);
                if ax <= x1 {
                    (a * a - ax * ax).sqrt()
                } else if ax < x2 {
                    (a * a - s * ax) / (1.0 + s * s + s.powi(4)).sqrt()
                } else {
                    (1.0 - s * s) * half_ellipse((ax - 2.0 * s) / a)
                }
            }
        };
        Ok(y)
    }

    /// Closed counterclockwise boundary from `grid` abscissae per half.
    pub fn closed_curve(&self, grid: usize) -> Result<Vec<Complex64>> {
        if grid < 2 {
            return Err(SpecError::domain("boundary grid needs at least 2 points"));
        }
        let w = self.half_width;
        let xs: Vec<f64> = (0..grid).map(|i| w - 2.0 * w * i as f64 / (grid - 1) as f64).collect();
        let mut pts = Vec::with_capacity(2 * grid);
        for &x in &xs {
            pts.push(Complex64::new(x, self.eval(x)?));
        }
        for &x in xs.iter().rev().skip(1).take(grid - 2) {
            pts.push(Complex64::new(x, -self.eval(x)?));
        }
        Ok(pts)
    }
}

/// Upper boundary value `f(x)` of the chosen region.
pub fn fz_boundary(kind: BoundaryKind, x: f64, params: &FzParams) -> Result<f64> {
    PiecewiseBoundary::new(kind, *params).eval(x)
}

/// Both square roots of every boundary point.
pub fn sqrt_region(boundary: &[Complex64]) -> PointCloud {
    let mut pts = Vec::with_capacity(2 * boundary.len());
    for w in boundary {
        let r = w.sqrt();
        pts.push(r);
        pts.push(-r);
    }
    PointCloud::new("sqrt-region", pts)
}

/// Boundary of `{z : z² ∈ K}` from a boundary of a region `K` whose interior
/// contains 0, ordered counterclockwise.
pub fn sqrt_boundary(boundary: &[Complex64]) -> Vec<Complex64> {
    let mut polar: Vec<(f64, f64)> =
        boundary.iter().map(|w| (w.arg().rem_euclid(2.0 * PI), w.norm())).collect();
    polar.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half: Vec<Complex64> = polar.iter().map(|&(t, r)| Complex64::from_polar(r.sqrt(), t / 2.0)).collect();
    half.iter().copied().chain(half.iter().map(|z| -z)).collect()
}

/// Numerical range of `A` as the hull of the two Laurent ellipses.
pub fn nr_region(params: &FzParams, k: usize) -> Result<ConvexRegion> {
    pe_numrange(&TridiagSpec::feinberg_zee(params.sigma)?, k)
}

/// Numerical range of `A²` as the hull of the three `B_j²` boundaries.
pub fn nr_of_square_region(params: &FzParams, k: usize) -> Result<ConvexRegion> {
    if k == 0 {
        return Err(SpecError::domain("grid must be non-empty"));
    }
    let mut pts = Vec::with_capacity(3 * k);
    for j in 1..=3u8 {
        for t in theta_grid(k) {
            pts.push(b_boundary(j, t, params)?);
        }
    }
    ConvexRegion::from_points(&pts, k)
}

/// `N(A)²`: hull of the squared boundary of `N(A)`.
pub fn nr_squared_region(params: &FzParams, k: usize) -> Result<ConvexRegion> {
    let nr = nr_region(params, k)?;
    let pts: Vec<Complex64> = nr.boundary_samples(4 * k).into_iter().chain(nr.vertices().iter().copied()).map(|z| z * z).collect();
    ConvexRegion::from_points(&pts, k)
}

/// Comparison of the upper boundaries of `N(A)²` and `N(A²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentReport {
    pub min_margin: f64,
    /// Abscissae, away from the shared outer arcs, where the margin vanishes.
    pub equality_points: Vec<f64>,
    pub contained: bool,
}

/// Tolerance under which a margin counts as an equality point.
pub const EQUALITY_TOL: f64 = 1e-10;

/// Margin `f_{N(A)²}(x) − g_{N(A²)}(x)` on `grid` equispaced abscissae.
pub fn containment_report(params: &FzParams, grid: usize) -> Result<ContainmentReport> {
    if grid < 2 {
        return Err(SpecError::domain("grid needs at least 2 points"));
    }
    let f = PiecewiseBoundary::new(BoundaryKind::NrSquared, *params);
    let g = PiecewiseBoundary::new(BoundaryKind::NrOfSquare, *params);
    let w = f.half_width;
    let shared_from = g.breakpoints[1];
    let mut min_margin = f64::INFINITY;
    let mut equality_points = Vec::new();
    for i in 0..grid {
        let x = -w + 2.0 * w * i as f64 / (grid - 1) as f64;
        let m = f.eval(x)? - g.eval(x)?;
        min_margin = min_margin.min(m);
        if x.abs() < shared_from && m.abs() <= EQUALITY_TOL {
            equality_points.push(x);
        }
    }
    Ok(ContainmentReport { min_margin, equality_points, contained: min_margin >= -EQUALITY_TOL })
}

/// Signed distance-like margin of `z` against the closed form of `N(A)`:
/// `f(Re z) − |Im z|`, negative outside.
pub fn nr_margin(z: Complex64, params: &FzParams) -> f64 {
    let f = PiecewiseBoundary::new(BoundaryKind::Nr, *params);
    if z.re.abs() > f.half_width {
        return -(z.re.abs() - f.half_width);
    }
    f.eval(z.re).map(|y| y - z.im.abs()).unwrap_or(f64::NEG_INFINITY)
}

/// Samples of `∂√N(A²)` paired with their margin inside `N(A)`.
pub fn sqrt_region_margins(params: &FzParams, k: usize) -> Result<Vec<(Complex64, f64)>> {
    let region = nr_of_square_region(params, k)?;
    let boundary: Vec<Complex64> =
        region.boundary_samples(4 * k).into_iter().chain(region.vertices().iter().copied()).collect();
    Ok(sqrt_region(&boundary).points.into_iter().map(|z| (z, nr_margin(z, params))).collect())
}

/// `√(2(1+σ²))`, the diamond `|x| + |y| ≤ c` containing `N(A)`.
pub fn chada_bound(params: &FzParams) -> f64 {
    (2.0 * (1.0 + params.sigma * params.sigma)).sqrt()
}

/// The 3-periodic five-diagonal operator whose rotated numerical range escapes
/// the hull of the Laurent symbol curves.
pub fn five_diagonal_operator() -> PeriodicBandOperator {
    let one = Complex64::new(1.0, 0.0);
    PeriodicBandOperator::new(
        3,
        vec![
            (-2, vec![one; 3]),
            (-1, vec![one; 3]),
            (0, vec![Complex64::new(0.0, 0.0); 3]),
            (1, vec![one, -one, one]),
            (2, vec![one; 3]),
        ],
    )
    .expect("valid operator")
}

/// Numbers reported by [`five_diagonal_counterexample`].
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleReport {
    pub b0_eigenvalues: Vec<f64>,
    pub b0_expected: Vec<f64>,
    pub b0_max_error: f64,
    /// `−λ_min(b(0))`, a lower bound for `r_π(A)`.
    pub r_pi_lower_bound: f64,
    /// `r_π` of the leading 63-section.
    pub r_pi_section: f64,
    /// `max_θ λ_max` of the symbol of `Re(e^{iπ} A)` on the grid, equal to `r_π(A)`
    /// up to grid resolution.
    pub r_pi_symbol_max: f64,
    pub laurent_bound: f64,
    pub laurent_c1_min: f64,
    pub laurent_c2_min: f64,
    pub exceeds: bool,
}

/// Grid used for the Laurent minima.
pub const COUNTEREXAMPLE_GRID: usize = 7200;

pub fn five_diagonal_counterexample() -> Result<CounterexampleReport> {
    let a = five_diagonal_operator();
    let b = a.hermitian_part(0.0);
    let mut eig: Vec<f64> = complex_eigenvalues(&periodic_symbol_matrix(&b, 0.0), DEFAULT_EIG_TOL)?
        .iter()
        .map(|z| z.re)
        .collect();
    eig.sort_by(f64::total_cmp);
    let r = 33f64.sqrt() / 2.0;
    let expected = vec![0.5 - r, -1.0, 0.5 + r];
    let b0_max_error = eig.iter().zip(&expected).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let r_pi_lower_bound = -eig[0];
    let r_pi_section = numerical_abscissa_section(&a.section(0, 63)?, PI, DEFAULT_BISECTION_TOL)?;
    let r_pi_symbol_max = periodic_spectrum_curve(&a.hermitian_part(PI), COUNTEREXAMPLE_GRID)?
        .points
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);

    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let c1 = PeriodicBandOperator::laurent(&[(-2, one), (-1, one), (0, zero), (1, one), (2, one)])?;
    let c2 = PeriodicBandOperator::laurent(&[(-2, one), (-1, one), (0, zero), (1, -one), (2, one)])?;
    let min_re = |op: &PeriodicBandOperator| -> Result<f64> {
        Ok(periodic_spectrum_curve(op, COUNTEREXAMPLE_GRID)?.points.iter().map(|z| z.re).fold(f64::INFINITY, f64::min))
    };
    let laurent_c1_min = min_re(&c1)?;
    let laurent_c2_min = min_re(&c2)?;
    let laurent_bound = -laurent_c1_min.min(laurent_c2_min);
    Ok(CounterexampleReport {
        b0_eigenvalues: eig,
        b0_expected: expected,
        b0_max_error,
        r_pi_lower_bound,
        r_pi_section,
        r_pi_symbol_max,
        laurent_bound,
        laurent_c1_min,
        laurent_c2_min,
        exceeds: r_pi_lower_bound > 2.25,
    })
}
