//! Small dense complex matrices and their eigenvalues.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Result, SpecError};

/// Default relative deflation tolerance for [`complex_eigenvalues`].
pub const DEFAULT_EIG_TOL: f64 = 1e-14;

/// Largest dimension accepted by the eigenvalue solver.
pub const MAX_EIG_DIM: usize = 64;

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(SpecError::shape("matrix rows must form a square"));
        }
        Ok(ComplexMatrix { dim, data: rows.concat() })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> =
            rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect();
        ComplexMatrix::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Principal submatrix on the given index list.
    pub fn submatrix(&self, idx: &[usize]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(idx.len());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigenvalues of a small dense complex matrix.
///
/// Householder reduction to Hessenberg form followed by single-shift QR
/// sweeps with Wilkinson shifts. A subdiagonal entry is set to zero once it
/// falls below `tol` times the neighbouring diagonal magnitudes (or `tol`
/// times the matrix norm), so each returned value has backward error of
/// order `tol·‖M‖`.
pub fn complex_eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let n = m.dim();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n > MAX_EIG_DIM {
        return Err(SpecError::shape(format!("dimension {n} exceeds {MAX_EIG_DIM}")));
    }
    if !(tol > 0.0) {
        return Err(SpecError::domain("tolerance must be positive"));
    }
    if m.data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SpecError::domain("matrix has non-finite entries"));
    }
    let mut h = m.clone();
    hessenberg(&mut h);
    hessenberg_qr(&mut h, tol)
}

fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.dim();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A <- (I - 2vv*) A
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (t, vt) in v.iter().enumerate() {
                s += vt.conj() * a[(k + 1 + t, j)];
            }
            for (t, vt) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= 2.0 * vt * s;
            }
        }
        // A <- A (I - 2vv*)
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (t, vt) in v.iter().enumerate() {
                s += a[(i, k + 1 + t)] * vt;
            }
            for (t, vt) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= 2.0 * s * vt.conj();
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    if y.norm() == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if x.norm() == 0.0 {
        return (0.0, y.conj() / y.norm());
    }
    let r = x.norm().hypot(y.norm());
    let c = x.norm() / r;
    let s = (x / x.norm()) * y.conj() / r;
    (c, s)
}

fn hessenberg_qr(h: &mut ComplexMatrix, tol: f64) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let norm = h.frobenius_norm();
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let max_iter = 60 * n.max(2);
    let mut total_iter = 0usize;
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        // locate the start of the active unreduced block
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let scale = h[(l, l)].norm() + h[(l - 1, l - 1)].norm();
            if sub <= tol * scale || sub <= f64::EPSILON * norm {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total_iter += 1;
        if total_iter > max_iter {
            return Err(SpecError::Numeric {
                reason: format!("QR iteration did not converge, {} eigenvalues undetermined", hi + 1),
                dim: n,
                iterations: total_iter,
            });
        }
        let mu = if iter.is_multiple_of(11) {
            // exceptional shift
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.25 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(h, l, hi, mu);
    }
    Ok(eig)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = 0.5 * (a - d);
    let disc = (half * half + b * c).sqrt();
    let m1 = 0.5 * (a + d) + disc;
    let m2 = 0.5 * (a + d) - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn qr_sweep(h: &mut ComplexMatrix, l: usize, hi: usize, mu: Complex64) {
    for i in l..=hi {
        h[(i, i)] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let u = h[(k, j)];
            let w = h[(k + 1, j)];
            h[(k, j)] = c * u + s * w;
            h[(k + 1, j)] = -s.conj() * u + c * w;
        }
        rots.push((c, s));
    }
    for (off, &(c, s)) in rots.iter().enumerate() {
        let k = l + off;
        let top = (k + 2).min(hi);
        for i in l..=top {
            let u = h[(i, k)];
            let w = h[(i, k + 1)];
            h[(i, k)] = u * c + w * s.conj();
            h[(i, k + 1)] = -u * s + w * c;
        }
    }
    for i in l..=hi {
        h[(i, i)] += mu;
    }
}
