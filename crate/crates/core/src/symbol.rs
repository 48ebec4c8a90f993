//! Spectra of Laurent and periodic band operators through their symbols.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SpecError};
use crate::geometry::PointCloud;
use crate::linalg::{complex_eigenvalues, ComplexMatrix, DEFAULT_EIG_TOL};
use crate::operator::PeriodicBandOperator;

/// Default θ-grid size.
pub const DEFAULT_THETA_GRID: usize = 720;

/// Default number of potential values in the Hatano-Nelson sweep.
pub const DEFAULT_V_GRID: usize = 201;

/// Uniform grid `2πk/K`, `k = 0..K`.
pub fn theta_grid(k: usize) -> Vec<f64> {
    (0..k).map(|i| 2.0 * std::f64::consts::PI * i as f64 / k as f64).collect()
}

fn check_grid(k: usize) -> Result<()> {
    if k == 0 {
        Err(SpecError::domain("grid size must be positive"))
    } else {
        Ok(())
    }
}

/// Samples `u_m1 e^{iθ} + u0 + u1 e^{-iθ}` on the θ-grid.
pub fn tridiagonal_laurent_curve(u_m1: Complex64, u0: Complex64, u1: Complex64, k: usize) -> Result<PointCloud> {
    check_grid(k)?;
    let pts = theta_grid(k)
        .into_iter()
        .map(|t| {
            let e = Complex64::from_polar(1.0, t);
            u_m1 * e + u0 + u1 * e.conj()
        })
        .collect();
    Ok(PointCloud::new("laurent-curve", pts))
}

/// Symbol `b(θ) = Σ_k B_k e^{-ikθ}` with `(B_k)_{r,c} = B[r + kp][c]`.
pub fn periodic_symbol_matrix(b: &PeriodicBandOperator, theta: f64) -> ComplexMatrix {
    let p = b.period() as i64;
    let mut m = ComplexMatrix::zeros(b.period());
    for r in 0..p {
        for &o in b.offsets() {
            // column c + (jump) p of row r carries offset o; fold it into column c
            let c = (r + o).rem_euclid(p);
            let k = (c - r - o) / p;
            let phase = Complex64::from_polar(1.0, -(k as f64) * theta);
            m[(r as usize, c as usize)] += b.entry(o, r) * phase;
        }
    }
    m
}

/// Union over the θ-grid of the eigenvalues of the symbol.
pub fn periodic_spectrum_curve(b: &PeriodicBandOperator, k: usize) -> Result<PointCloud> {
    check_grid(k)?;
    let chunks: Result<Vec<Vec<Complex64>>> = theta_grid(k)
        .into_par_iter()
        .map(|t| complex_eigenvalues(&periodic_symbol_matrix(b, t), DEFAULT_EIG_TOL))
        .collect();
    Ok(PointCloud::new("periodic-spectrum", chunks?.concat()))
}

/// Union of the ellipses `e^{g+iθ} + v + e^{-(g+iθ)}` for `v` on a grid of
/// `[v_min, v_max]`, together with the flag `v_max − v_min ≥ 4 cosh g` telling
/// whether the union of curves fills a convex set.
pub fn hatano_nelson_region(g: f64, v_min: f64, v_max: f64, k: usize) -> Result<(PointCloud, bool)> {
    hatano_nelson_region_with_grid(g, v_min, v_max, k, DEFAULT_V_GRID)
}

pub fn hatano_nelson_region_with_grid(
    g: f64,
    v_min: f64,
    v_max: f64,
    k: usize,
    v_grid: usize,
) -> Result<(PointCloud, bool)> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(SpecError::domain(format!("g must be positive, got {g}")));
    }
    if !(v_min <= v_max) {
        return Err(SpecError::domain("v_min must not exceed v_max"));
    }
    check_grid(k)?;
    if v_grid == 0 {
        return Err(SpecError::domain("potential grid must be non-empty"));
    }
    let (a, b) = (2.0 * g.cosh(), 2.0 * g.sinh());
    let vs: Vec<f64> = if v_grid == 1 || v_min == v_max {
        vec![v_min]
    } else {
        (0..v_grid).map(|i| v_min + (v_max - v_min) * i as f64 / (v_grid - 1) as f64).collect()
    };
    let thetas = theta_grid(k);
    let mut pts = Vec::with_capacity(vs.len() * k);
    for &v in &vs {
        for &t in &thetas {
            pts.push(Complex64::new(v + a * t.cos(), b * t.sin()));
        }
    }
    let convex = v_max - v_min >= 2.0 * a;
    Ok((PointCloud::new("hatano-nelson", pts), convex))
}

/// Exact support function of the Hatano-Nelson ellipse sweep.
pub fn hatano_nelson_support(g: f64, v_min: f64, v_max: f64, phi: f64) -> f64 {
    let (a, b) = (2.0 * g.cosh(), 2.0 * g.sinh());
    let (s, c) = phi.sin_cos();
    (v_min * c).max(v_max * c) + (a * a * c * c + b * b * s * s).sqrt()
}
