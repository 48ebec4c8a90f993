//! Planar point clouds, convex hulls, convex regions and Hausdorff distances.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Result, SpecError};

/// Points closer than this are merged by the hull.
pub const DEDUP_TOL: f64 = 1e-12;

/// A finite set of sampled points in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Complex64>,
    pub label: String,
}

impl PointCloud {
    pub fn new(label: impl Into<String>, points: Vec<Complex64>) -> Self {
        PointCloud { points, label: label.into() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Removes points within `tol` of an earlier point in lexicographic order.
    pub fn dedup(&self, tol: f64) -> PointCloud {
        let mut pts = self.points.clone();
        sort_lex(&mut pts);
        let mut out: Vec<Complex64> = Vec::with_capacity(pts.len());
        for p in pts {
            if out.last().is_none_or(|q| (p - q).norm() > tol) {
                out.push(p);
            }
        }
        PointCloud::new(self.label.clone(), out)
    }

    /// `max Re(e^{iφ} z)` over the cloud.
    pub fn support(&self, phi: f64) -> f64 {
        support_of(&self.points, phi)
    }
}

fn support_of(points: &[Complex64], phi: f64) -> f64 {
    let (s, c) = phi.sin_cos();
    points.iter().map(|z| z.re * c - z.im * s).fold(f64::NEG_INFINITY, f64::max)
}

fn sort_lex(pts: &mut [Complex64]) {
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull vertices in counterclockwise order, starting from the
/// lexicographically smallest point. Collinear and duplicate points are dropped.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.iter().copied().filter(|z| z.re.is_finite() && z.im.is_finite()).collect();
    sort_lex(&mut pts);
    let mut uniq: Vec<Complex64> = Vec::with_capacity(pts.len());
    for p in pts {
        if uniq.last().is_none_or(|q| (p - q).norm() > DEDUP_TOL) {
            uniq.push(p);
        }
    }
    if uniq.len() <= 2 {
        return uniq;
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &uniq {
        lo = lo.min(p.re).min(p.im);
        hi = hi.max(p.re).max(p.im);
    }
    let scale = (hi - lo).max(f64::MIN_POSITIVE);
    let eps = 1e-14 * scale * scale;
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * uniq.len());
    for &p in &uniq {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in uniq.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// A convex polygon with a tabulated support function.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion {
    vertices: Vec<Complex64>,
    support: Vec<(f64, f64)>,
}

impl ConvexRegion {
    /// Hull of `points`, with support sampled at `k` equispaced angles.
    pub fn from_points(points: &[Complex64], k: usize) -> Result<Self> {
        let vertices = convex_hull(points);
        if vertices.is_empty() {
            return Err(SpecError::domain("cannot build a region from no points"));
        }
        if k == 0 {
            return Err(SpecError::domain("angle grid must be non-empty"));
        }
        let support = (0..k)
            .map(|i| {
                let phi = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
                (phi, support_of(&vertices, phi))
            })
            .collect();
        Ok(ConvexRegion { vertices, support })
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    /// Tabulated `(φ_k, r(φ_k))` pairs.
    pub fn support_table(&self) -> &[(f64, f64)] {
        &self.support
    }

    /// Support function `max Re(e^{iφ} z)` evaluated on the vertices.
    pub fn support(&self, phi: f64) -> f64 {
        support_of(&self.vertices, phi)
    }

    /// Largest disagreement between the table and the vertices.
    pub fn support_consistency(&self) -> f64 {
        self.support
            .iter()
            .map(|&(phi, r)| (support_of(&self.vertices, phi) - r).abs())
            .fold(0.0, f64::max)
    }

    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Euclidean distance from `z` to the polygon boundary.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        if self.vertices.len() == 1 {
            return (z - self.vertices[0]).norm();
        }
        self.edges().map(|(a, b)| segment_distance(z, a, b)).fold(f64::INFINITY, f64::min)
    }

    /// True if `z` lies in the polygon or within `tol` of it.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        if self.vertices.len() <= 2 {
            return self.boundary_distance(z) <= tol;
        }
        let inside = self.edges().all(|(a, b)| cross(a, b, z) >= 0.0);
        inside || self.boundary_distance(z) <= tol
    }

    pub fn perimeter(&self) -> f64 {
        if self.vertices.len() == 1 {
            return 0.0;
        }
        self.edges().map(|(a, b)| (b - a).norm()).sum()
    }

    /// `count` points equally spaced in arc length along the boundary.
    pub fn boundary_samples(&self, count: usize) -> Vec<Complex64> {
        let per = self.perimeter();
        if per == 0.0 || count == 0 {
            return vec![self.vertices[0]; count.min(1)];
        }
        let edges: Vec<(Complex64, Complex64)> = self.edges().collect();
        let step = per / count as f64;
        let mut out = Vec::with_capacity(count);
        let mut e = 0usize;
        let mut start = 0.0;
        for i in 0..count {
            let s = i as f64 * step;
            while e + 1 < edges.len() && start + (edges[e].1 - edges[e].0).norm() < s {
                start += (edges[e].1 - edges[e].0).norm();
                e += 1;
            }
            let (a, b) = edges[e];
            let len = (b - a).norm();
            let t = if len > 0.0 { ((s - start) / len).clamp(0.0, 1.0) } else { 0.0 };
            out.push(a + (b - a) * t);
        }
        out
    }
}

/// Distance from `z` to the segment `[a, b]`.
pub fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// `max_{p∈P} min_{q∈Q} |p − q|`.
pub fn directed_hausdorff(p: &[Complex64], q: &[Complex64]) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(SpecError::domain("Hausdorff distance needs non-empty inputs"));
    }
    Ok(p
        .par_iter()
        .map(|a| q.iter().map(|b| (a - b).norm_sqr()).fold(f64::INFINITY, f64::min))
        .reduce(|| 0.0, f64::max)
        .sqrt())
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(p: &[Complex64], q: &[Complex64]) -> Result<f64> {
    Ok(directed_hausdorff(p, q)?.max(directed_hausdorff(q, p)?))
}
