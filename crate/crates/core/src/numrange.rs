//! Numerical abscissae and numerical ranges of tridiagonal operators.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SpecError};
use crate::geometry::ConvexRegion;
use crate::linalg::{complex_eigenvalues, ComplexMatrix, DEFAULT_EIG_TOL, MAX_EIG_DIM};
use crate::operator::{BandMatrix, TridiagSpec};
use crate::symbol::tridiagonal_laurent_curve;

/// Default absolute tolerance of [`symtridiag_max_eig`].
pub const DEFAULT_BISECTION_TOL: f64 = 1e-12;

/// Real symmetric tridiagonal matrix with non-negative off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(SpecError::shape("diagonal must be non-empty"));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(SpecError::shape(format!(
                "off-diagonal length {} does not match dimension {}",
                offdiag.len(),
                diag.len()
            )));
        }
        if offdiag.iter().any(|&e| !(e >= 0.0)) {
            return Err(SpecError::domain("off-diagonal entries must be non-negative"));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(SpecError::domain("entries must be finite"));
        }
        Ok(SymTridiag { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// `max|C_jj| + 2 max C_{j,j+1}`, an upper bound for the operator norm.
    pub fn wiener_bound(&self) -> f64 {
        let d = self.diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let e = self.offdiag.iter().fold(0.0f64, |m, &x| m.max(x));
        d + 2.0 * e
    }

    /// Number of eigenvalues strictly below `x` (Sturm sign count).
    pub fn count_below(&self, x: f64) -> usize {
        let emax = self.offdiag.iter().fold(1.0f64, |m, &e| m.max(e * e));
        let pivmin = f64::MIN_POSITIVE * emax;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.diag.len() {
            let e = self.offdiag[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Leading principal `m × m` block.
    pub fn leading(&self, m: usize) -> Result<SymTridiag> {
        if m == 0 || m > self.dim() {
            return Err(SpecError::shape(format!("cannot take a {m}-section of a {}-matrix", self.dim())));
        }
        SymTridiag::new(self.diag[..m].to_vec(), self.offdiag[..m - 1].to_vec())
    }
}

/// Real symmetric matrix unitarily similar to `½(e^{iφ}A + e^{-iφ}A*)`.
///
/// The diagonal is `Re(e^{iφ}A_jj)` and the off-diagonal is
/// `½|e^{iφ}A_{j,j+1} + e^{-iφ}conj(A_{j+1,j})|`.
pub fn rotate_hermitian_part(a: &BandMatrix, phi: f64) -> Result<SymTridiag> {
    if !a.is_tridiagonal() {
        return Err(SpecError::shape("matrix is not tridiagonal"));
    }
    let rot = Complex64::from_polar(1.0, phi);
    let n = a.dim();
    let diag = (0..n).map(|j| (rot * a.get(j, j)).re).collect();
    let offdiag = (0..n.saturating_sub(1)).map(|j| hermitian_offdiag(a, j, rot).norm()).collect();
    SymTridiag::new(diag, offdiag)
}

fn hermitian_offdiag(a: &BandMatrix, j: usize, rot: Complex64) -> Complex64 {
    0.5 * (rot * a.get(j, j + 1) + rot.conj() * a.get(j + 1, j).conj())
}

/// Unimodular diagonal `t` with `T B T*` real, where `B = ½(e^{iφ}A + e^{-iφ}A*)`.
///
/// `t_1 = 1` and `t_{j+1} = t_j · b_j/|b_j|`, taking `0/|0| = 1`.
pub fn hermitian_rotation_phases(a: &BandMatrix, phi: f64) -> Result<Vec<Complex64>> {
    if !a.is_tridiagonal() {
        return Err(SpecError::shape("matrix is not tridiagonal"));
    }
    let rot = Complex64::from_polar(1.0, phi);
    let mut t = vec![Complex64::new(1.0, 0.0); a.dim()];
    for j in 0..a.dim().saturating_sub(1) {
        let b = hermitian_offdiag(a, j, rot);
        let sign = if b.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { b / b.norm() };
        t[j + 1] = t[j] * sign;
    }
    Ok(t)
}

/// Largest eigenvalue by Sturm bisection, to absolute accuracy `tol`.
///
/// The returned value is the upper end of the final bracket, so it never
/// falls below the true eigenvalue by more than rounding in the Sturm count.
pub fn symtridiag_max_eig(c: &SymTridiag, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(SpecError::domain("tolerance must be positive"));
    }
    let n = c.dim();
    let dmax = c.diag.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let emax = c.offdiag.iter().fold(0.0f64, |m, &x| m.max(x));
    let pad = f64::EPSILON * (c.wiener_bound() + 1.0) * 4.0;
    let mut lo = dmax - pad;
    let mut hi = dmax + 2.0 * emax + pad;
    if c.count_below(hi) != n {
        return Err(SpecError::Numeric {
            reason: "bracket does not enclose the spectrum".into(),
            dim: n,
            iterations: 0,
        });
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if c.count_below(mid) == n {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > 2000 {
            return Err(SpecError::Numeric { reason: "bisection did not terminate".into(), dim: n, iterations });
        }
    }
    Ok(hi)
}

/// `r_φ(A) = max Re(e^{iφ} N(A))` for a finite section.
pub fn numerical_abscissa_section(a: &BandMatrix, phi: f64, tol: f64) -> Result<f64> {
    if a.is_tridiagonal() {
        return symtridiag_max_eig(&rotate_hermitian_part(a, phi)?, tol);
    }
    if a.dim() > MAX_EIG_DIM {
        return Err(SpecError::shape(format!(
            "non-tridiagonal sections are limited to dimension {MAX_EIG_DIM}"
        )));
    }
    let dense = a.to_dense();
    let rot = Complex64::from_polar(1.0, phi);
    let n = dense.dim();
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = 0.5 * (rot * dense[(i, j)] + rot.conj() * dense[(j, i)].conj());
        }
    }
    let e = complex_eigenvalues(&h, DEFAULT_EIG_TOL)?;
    Ok(e.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Numerical abscissa `r_0` of a self-adjoint 2-periodic tridiagonal operator
/// with diagonal `(a, b)` and off-diagonal `(c, d)`:
/// `½(a + b + √((a − b)² + 4(c + d)²))`.
pub fn two_periodic_abscissa(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    if !(c >= 0.0 && d >= 0.0) {
        return Err(SpecError::domain("off-diagonal values must be non-negative"));
    }
    if ![a, b, c, d].iter().all(|x| x.is_finite()) {
        return Err(SpecError::domain("values must be finite"));
    }
    Ok(0.5 * (a + b + ((a - b).powi(2) + 4.0 * (c + d).powi(2)).sqrt()))
}

/// Numerical range of the pseudo-ergodic tridiagonal operator: the convex hull
/// of the symbol curves of all Laurent operators built from the alphabets.
pub fn pe_numrange(spec: &TridiagSpec, k: usize) -> Result<ConvexRegion> {
    if k == 0 {
        return Err(SpecError::domain("angle grid must be non-empty"));
    }
    let clouds: Result<Vec<Vec<Complex64>>> = spec
        .triples()
        .into_par_iter()
        .map(|(sup, d, sub)| tridiagonal_laurent_curve(sup, d, sub, k).map(|c| c.points))
        .collect();
    ConvexRegion::from_points(&clouds?.concat(), k)
}

/// Support of the diamond `|x| + |y| ≤ c` in direction φ.
pub fn diamond_support(c: f64, phi: f64) -> f64 {
    c * phi.cos().abs().max(phi.sin().abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hausdorff;
    use crate::operator::{build_tridiagonal_section, sample_sign_sequence, PeriodicBandOperator};
    use crate::symbol::{periodic_symbol_matrix, theta_grid};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn dense_max_eig(h: &ComplexMatrix) -> f64 {
        complex_eigenvalues(h, 1e-15).unwrap().iter().map(|z| z.re).fold(f64::MIN, f64::max)
    }

    #[test]
    fn rotation_examples() {
        let a = build_tridiagonal_section(&[c(1.0)], &[c(0.0); 2], &[c(1.0)]).unwrap();
        let s = rotate_hermitian_part(&a, 0.0).unwrap();
        assert_eq!(s.diag(), &[0.0, 0.0]);
        assert_eq!(s.offdiag(), &[1.0]);

        let a = build_tridiagonal_section(&[c(1.0)], &[c(0.0); 2], &[c(-1.0)]).unwrap();
        assert_eq!(rotate_hermitian_part(&a, 0.0).unwrap().offdiag(), &[0.0]);
        let s = rotate_hermitian_part(&a, FRAC_PI_2).unwrap();
        assert!((s.offdiag()[0] - 1.0).abs() < 1e-15);

        let mut bands = std::collections::BTreeMap::new();
        bands.insert(2, vec![c(1.0)]);
        bands.insert(0, vec![c(0.0); 3]);
        let five = BandMatrix::new(3, bands).unwrap();
        assert!(rotate_hermitian_part(&five, 0.0).is_err());
    }

    #[test]
    fn rotation_is_a_unitary_similarity() {
        let a = build_tridiagonal_section(
            &[Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, 0.0)],
            &[Complex64::new(0.3, -1.0), c(2.0), Complex64::new(0.0, 1.0), c(-1.0)],
            &[Complex64::new(0.0, 1.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        for phi in [0.0, 0.4, 2.0, 4.5] {
            let d = a.to_dense();
            let rot = Complex64::from_polar(1.0, phi);
            let t = hermitian_rotation_phases(&a, phi).unwrap();
            let s = rotate_hermitian_part(&a, phi).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    let b = 0.5 * (rot * d[(i, j)] + rot.conj() * d[(j, i)].conj());
                    let tb = t[i] * b * t[j].conj();
                    let expect = if i == j {
                        s.diag()[i]
                    } else if j == i + 1 {
                        s.offdiag()[i]
                    } else if i == j + 1 {
                        s.offdiag()[j]
                    } else {
                        0.0
                    };
                    assert!((tb - c(expect)).norm() < 1e-14, "phi={phi} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn max_eig_examples() {
        let one = SymTridiag::new(vec![5.0], vec![]).unwrap();
        assert!((symtridiag_max_eig(&one, 1e-12).unwrap() - 5.0).abs() < 1e-12);
        let three = SymTridiag::new(vec![0.0; 3], vec![1.0; 2]).unwrap();
        assert!((symtridiag_max_eig(&three, 1e-12).unwrap() - 2f64.sqrt()).abs() < 2e-12);
        let n = 50;
        let path = SymTridiag::new(vec![0.0; n], vec![1.0; n - 1]).unwrap();
        let exact = 2.0 * (PI / (n as f64 + 1.0)).cos();
        assert!((symtridiag_max_eig(&path, 1e-12).unwrap() - exact).abs() < 2e-12);
    }

    #[test]
    fn max_eig_matches_dense_solver() {
        let h = sample_sign_sequence(40, 0.7, 5).unwrap();
        let a = h.fz_section();
        for phi in [0.0, 0.9, 2.2, 3.7, 5.5] {
            let s = rotate_hermitian_part(&a, phi).unwrap();
            let dense = {
                let d = a.to_dense();
                let rot = Complex64::from_polar(1.0, phi);
                let mut m = ComplexMatrix::zeros(d.dim());
                for i in 0..d.dim() {
                    for j in 0..d.dim() {
                        m[(i, j)] = 0.5 * (rot * d[(i, j)] + rot.conj() * d[(j, i)].conj());
                    }
                }
                m
            };
            let oracle = dense_max_eig(&dense);
            assert!((symtridiag_max_eig(&s, 1e-12).unwrap() - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn fz_rotation_bounded_by_four() {
        let h = sample_sign_sequence(500, 1.0, 77).unwrap();
        let s = rotate_hermitian_part(&h.fz_section(), 0.0).unwrap();
        assert!(symtridiag_max_eig(&s, 1e-12).unwrap() <= 4.0);
    }

    #[test]
    fn abscissa_of_scalar_and_dense_fallback() {
        let a = build_tridiagonal_section(&[], &[Complex64::new(1.0, 2.0)], &[]).unwrap();
        let r = numerical_abscissa_section(&a, 0.3, 1e-12).unwrap();
        assert!((r - (Complex64::from_polar(1.0, 0.3) * Complex64::new(1.0, 2.0)).re).abs() < 1e-12);

        let op = PeriodicBandOperator::laurent(&[(-2, c(1.0)), (2, c(1.0))]).unwrap();
        let sec = op.section(0, 12).unwrap();
        let r = numerical_abscissa_section(&sec, 0.0, 1e-12).unwrap();
        // two decoupled paths of length 6: 2cos(π/7)
        assert!((r - 2.0 * (PI / 7.0).cos()).abs() < 1e-10);
    }

    #[test]
    fn fz_sections_at_quarter_angle_increase_toward_sqrt2() {
        let h = sample_sign_sequence(1024, 1.0, 3).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for n in [8usize, 32, 128, 512, 1024] {
            let a = h.window(0, n - 1).unwrap().fz_section();
            let r = numerical_abscissa_section(&a, FRAC_PI_4, 1e-12).unwrap();
            assert!(r >= prev - 1e-10);
            assert!(r <= 2f64.sqrt() + 1e-12);
            prev = r;
        }
        assert!(2f64.sqrt() - prev < 1e-4);
    }

    #[test]
    fn two_periodic_sections_approach_two() {
        let op = PeriodicBandOperator::new(2, vec![(-1, vec![c(1.0); 2]), (0, vec![c(0.0); 2]), (1, vec![c(1.0); 2])]).unwrap();
        let r = numerical_abscissa_section(&op.section(0, 2000).unwrap(), 0.0, 1e-12).unwrap();
        assert!((2.0 - r) < 1e-5 && r <= 2.0 + 1e-12);
    }

    #[test]
    fn two_periodic_formula_examples() {
        assert_eq!(two_periodic_abscissa(3.0, 1.0, 0.0, 0.0).unwrap(), 3.0);
        assert_eq!(two_periodic_abscissa(0.0, 0.0, 1.0, 1.0).unwrap(), 2.0);
        assert!(two_periodic_abscissa(0.0, 0.0, -1.0, 1.0).is_err());
    }

    fn two_periodic_symbol_max(a: f64, b: f64, cc: f64, d: f64, k: usize) -> f64 {
        let op = PeriodicBandOperator::new(2, vec![(-1, vec![c(d), c(cc)]), (0, vec![c(a), c(b)]), (1, vec![c(cc), c(d)])]).unwrap();
        theta_grid(k)
            .into_iter()
            .map(|t| dense_max_eig(&periodic_symbol_matrix(&op, t)))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn fz_block_at_right_angle_has_abscissa_one_plus_sigma_squared() {
        // even block of A² for alternating signs: diagonal ∓2σ, lower −σ², upper 1
        for sigma in [0.3, 0.8, 1.0] {
            let (a, b) = (0.0, 0.0);
            let cc = 0.5 * (Complex64::new(0.0, 1.0) + Complex64::new(0.0, -1.0) * c(-sigma * sigma)).norm();
            let r = two_periodic_abscissa(a, b, cc, cc).unwrap();
            assert!((r - (1.0 + sigma * sigma)).abs() < 1e-14);
        }
    }

    #[test]
    fn pe_numrange_examples() {
        let sq = pe_numrange(&TridiagSpec::feinberg_zee(1.0).unwrap(), 720).unwrap();
        let mut v = sq.vertices().to_vec();
        v.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
        assert_eq!(v.len(), 4);
        for target in [c(2.0), Complex64::new(0.0, 2.0), c(-2.0), Complex64::new(0.0, -2.0)] {
            assert!(v.iter().any(|z| (z - target).norm() < 1e-12));
        }
        let pt = pe_numrange(&TridiagSpec::new(&[c(0.0)], &[Complex64::new(3.0, 4.0)], &[c(0.0)]).unwrap(), 64).unwrap();
        assert_eq!(pt.vertices(), &[Complex64::new(3.0, 4.0)]);

        let s = 0.4;
        let el = pe_numrange(&TridiagSpec::new(&[c(s)], &[c(0.0)], &[c(1.0)]).unwrap(), 720).unwrap();
        assert!((el.support(0.0) - (1.0 + s)).abs() < 1e-12);
        assert!((el.support(FRAC_PI_2) - (1.0 - s)).abs() < 1e-12);
        assert!(el.support_consistency() < 1e-9);
    }

    #[test]
    fn pe_numrange_support_matches_exact_support() {
        let spec = TridiagSpec::new(
            &[c(0.5), Complex64::new(0.0, -0.7)],
            &[c(0.0), Complex64::new(1.0, 1.0)],
            &[c(1.0), c(-0.2)],
        )
        .unwrap();
        let k = 2880;
        let region = pe_numrange(&spec, k).unwrap();
        let bound = 4.0 * (1.0 - (PI / k as f64).cos());
        for phi in theta_grid(97) {
            let diff = spec.support(phi) - region.support(phi);
            assert!(diff >= -1e-12 && diff <= bound, "phi={phi} diff={diff}");
        }
    }

    #[test]
    fn square_and_inscribed_disk_are_apart() {
        let sq = pe_numrange(&TridiagSpec::feinberg_zee(1.0).unwrap(), 720).unwrap().boundary_samples(720);
        let disk: Vec<Complex64> = theta_grid(720).into_iter().map(|t| Complex64::from_polar(2f64.sqrt(), t)).collect();
        assert!(hausdorff(&sq, &disk).unwrap() > 0.5);
    }

    #[test]
    fn nested_sections_are_monotone() {
        for seed in 0..3u64 {
            let h = sample_sign_sequence(256, 0.6, seed).unwrap();
            let spec = TridiagSpec::feinberg_zee(0.6).unwrap();
            for phi in theta_grid(32) {
                let mut prev = f64::NEG_INFINITY;
                for n in [4usize, 16, 64, 257] {
                    let a = h.window(0, n - 1).unwrap().fz_section();
                    let r = numerical_abscissa_section(&a, phi, 1e-12).unwrap();
                    assert!(r >= prev - 1e-10, "seed={seed} phi={phi} n={n}");
                    assert!(r <= spec.support(phi) + 1e-8);
                    prev = r;
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn two_periodic_formula_matches_symbol(
            a in -3.0f64..3.0, b in -3.0f64..3.0, cc in 0.0f64..3.0, d in 0.0f64..3.0,
        ) {
            let r = two_periodic_abscissa(a, b, cc, d).unwrap();
            let oracle = two_periodic_symbol_max(a, b, cc, d, 720);
            prop_assert!((r - oracle).abs() < 1e-8, "r={} oracle={}", r, oracle);
        }

        #[test]
        fn sturm_count_is_monotone(diag in prop::collection::vec(-3.0f64..3.0, 1..30), x in -8.0f64..8.0, y in -8.0f64..8.0) {
            let n = diag.len();
            let s = SymTridiag::new(diag, vec![0.7; n - 1]).unwrap();
            let (lo, hi) = if x < y { (x, y) } else { (y, x) };
            prop_assert!(s.count_below(lo) <= s.count_below(hi));
            prop_assert!(symtridiag_max_eig(&s, 1e-12).unwrap() <= s.wiener_bound() + 1e-12);
        }
    }
}
