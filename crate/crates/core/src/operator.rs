//! Operator specifications, finite sections and seeded sign sequences.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SpecError};
use crate::linalg::ComplexMatrix;

/// Diagonal alphabets of a tridiagonal pseudo-ergodic operator.
///
/// `u_sub` holds the subdiagonal values, `u_diag` the diagonal values and
/// `u_sup` the superdiagonal values.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagSpec {
    u_sub: Vec<Complex64>,
    u_diag: Vec<Complex64>,
    u_sup: Vec<Complex64>,
}

fn dedup_set(values: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::with_capacity(values.len());
    for &v in values {
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

impl TridiagSpec {
    pub fn new(u_sub: &[Complex64], u_diag: &[Complex64], u_sup: &[Complex64]) -> Result<Self> {
        if u_sub.is_empty() || u_diag.is_empty() || u_sup.is_empty() {
            return Err(SpecError::domain("alphabets must be non-empty"));
        }
        let all_finite = u_sub
            .iter()
            .chain(u_diag)
            .chain(u_sup)
            .all(|z| z.re.is_finite() && z.im.is_finite());
        if !all_finite {
            return Err(SpecError::domain("alphabet values must be finite"));
        }
        Ok(TridiagSpec {
            u_sub: dedup_set(u_sub),
            u_diag: dedup_set(u_diag),
            u_sup: dedup_set(u_sup),
        })
    }

    /// Random hopping operator: superdiagonal 1, diagonal 0, subdiagonal ±σ.
    pub fn feinberg_zee(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        let s = Complex64::new(sigma, 0.0);
        TridiagSpec::new(&[s, -s], &[Complex64::new(0.0, 0.0)], &[Complex64::new(1.0, 0.0)])
    }

    pub fn u_sub(&self) -> &[Complex64] {
        &self.u_sub
    }

    pub fn u_diag(&self) -> &[Complex64] {
        &self.u_diag
    }

    pub fn u_sup(&self) -> &[Complex64] {
        &self.u_sup
    }

    /// All (superdiagonal, diagonal, subdiagonal) triples.
    pub fn triples(&self) -> Vec<(Complex64, Complex64, Complex64)> {
        let mut out = Vec::new();
        for &a in &self.u_sup {
            for &b in &self.u_diag {
                for &c in &self.u_sub {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    /// Exact support function of the pseudo-ergodic numerical range.
    ///
    /// Each triple contributes `Re(e^{iφ}u0) + |e^{iφ}u_sup + e^{-iφ}conj(u_sub)|`.
    pub fn support(&self, phi: f64) -> f64 {
        let rot = Complex64::from_polar(1.0, phi);
        self.triples()
            .into_iter()
            .map(|(sup, d, sub)| (rot * d).re + (rot * sup + rot.conj() * sub.conj()).norm())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Samples an `n × n` section with entries drawn uniformly from the alphabets.
    pub fn sample_section<R: Rng>(&self, n: usize, rng: &mut R) -> Result<BandMatrix> {
        if n == 0 {
            return Err(SpecError::shape("section size must be positive"));
        }
        let mut sup = Vec::with_capacity(n - 1);
        let mut diag = Vec::with_capacity(n);
        let mut sub = Vec::with_capacity(n - 1);
        for i in 0..n {
            diag.push(pick(&self.u_diag, rng));
            if i + 1 < n {
                sub.push(pick(&self.u_sub, rng));
                sup.push(pick(&self.u_sup, rng));
            }
        }
        build_tridiagonal_section(&sup, &diag, &sub)
    }
}

fn pick<R: Rng>(set: &[Complex64], rng: &mut R) -> Complex64 {
    if set.len() == 1 {
        set[0]
    } else {
        set[rng.gen_range(0..set.len())]
    }
}

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma <= 1.0 {
        Ok(())
    } else {
        Err(SpecError::domain(format!("sigma must lie in (0, 1], got {sigma}")))
    }
}

/// Seeded generator for stream `stream` of `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A p-periodic band operator on the bi-infinite lattice.
///
/// `entry(k, i)` is the value at row `i`, column `i + k` for every row
/// congruent to `i` modulo the period.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicBandOperator {
    period: usize,
    offsets: Vec<i64>,
    entries: BTreeMap<i64, Vec<Complex64>>,
}

impl PeriodicBandOperator {
    pub fn new(period: usize, bands: Vec<(i64, Vec<Complex64>)>) -> Result<Self> {
        if period == 0 {
            return Err(SpecError::domain("period must be positive"));
        }
        let mut entries = BTreeMap::new();
        for (k, vals) in bands {
            if vals.len() != period {
                return Err(SpecError::shape(format!(
                    "band {k} has {} entries, expected {period}",
                    vals.len()
                )));
            }
            if entries.insert(k, vals).is_some() {
                return Err(SpecError::shape(format!("band {k} given twice")));
            }
        }
        if entries.is_empty() {
            return Err(SpecError::shape("at least one band is required"));
        }
        let offsets = entries.keys().copied().collect();
        Ok(PeriodicBandOperator { period, offsets, entries })
    }

    /// Laurent (1-periodic) operator from `(offset, value)` pairs.
    pub fn laurent(bands: &[(i64, Complex64)]) -> Result<Self> {
        PeriodicBandOperator::new(1, bands.iter().map(|&(k, v)| (k, vec![v])).collect())
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    /// Value at row `i`, column `i + k`.
    pub fn entry(&self, k: i64, i: i64) -> Complex64 {
        match self.entries.get(&k) {
            Some(v) => v[i.rem_euclid(self.period as i64) as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    /// `½(e^{iφ}A + e^{-iφ}A*)`.
    pub fn hermitian_part(&self, phi: f64) -> PeriodicBandOperator {
        let rot = Complex64::from_polar(1.0, phi);
        let mut ks: Vec<i64> = self.offsets.iter().flat_map(|&k| [k, -k]).collect();
        ks.sort_unstable();
        ks.dedup();
        let p = self.period as i64;
        let bands = ks
            .into_iter()
            .map(|k| {
                let vals = (0..p)
                    .map(|i| 0.5 * (rot * self.entry(k, i) + rot.conj() * self.entry(-k, i + k).conj()))
                    .collect();
                (k, vals)
            })
            .collect();
        PeriodicBandOperator::new(self.period, bands).expect("well-formed by construction")
    }

    /// The same operator described with period `m·p`.
    pub fn repeat(&self, m: usize) -> Result<PeriodicBandOperator> {
        if m == 0 {
            return Err(SpecError::domain("repeat factor must be positive"));
        }
        let q = self.period * m;
        let bands = self
            .offsets
            .iter()
            .map(|&k| (k, (0..q as i64).map(|i| self.entry(k, i)).collect()))
            .collect();
        PeriodicBandOperator::new(q, bands)
    }

    /// Finite section on rows and columns `start..start + n`.
    pub fn section(&self, start: i64, n: usize) -> Result<BandMatrix> {
        if n == 0 {
            return Err(SpecError::shape("section size must be positive"));
        }
        let mut bands = BTreeMap::new();
        for &k in &self.offsets {
            let len = n as i64 - k.abs();
            if len <= 0 {
                continue;
            }
            let vals = (0..len)
                .map(|idx| {
                    let row = if k >= 0 { idx } else { idx - k };
                    self.entry(k, start + row)
                })
                .collect();
            bands.insert(k, vals);
        }
        BandMatrix::new(n, bands)
    }
}

/// Random ±σ sequence, values `h_1, h_2, …` stored from index 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SignSequence {
    sigma: f64,
    values: Vec<f64>,
    seed: Option<u64>,
}

impl SignSequence {
    pub fn new(sigma: f64, values: Vec<f64>) -> Result<Self> {
        check_sigma(sigma)?;
        if let Some(v) = values.iter().find(|v| v.abs() != sigma) {
            return Err(SpecError::domain(format!("value {v} is not ±{sigma}")));
        }
        Ok(SignSequence { sigma, values, seed: None })
    }

    /// Builds `σ·s_j` from signs `s_j ∈ {+1, −1}`.
    pub fn from_signs(sigma: f64, signs: &[i8]) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(SpecError::domain("signs must be +1 or -1"));
        }
        SignSequence::new(sigma, signs.iter().map(|&s| sigma * s as f64).collect())
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All signs reversed.
    pub fn flipped(&self) -> SignSequence {
        SignSequence {
            sigma: self.sigma,
            values: self.values.iter().map(|v| -v).collect(),
            seed: self.seed,
        }
    }

    /// The subsequence `values[start..end]`.
    pub fn window(&self, start: usize, end: usize) -> Result<SignSequence> {
        if start > end || end > self.values.len() {
            return Err(SpecError::shape(format!(
                "window {start}..{end} outside sequence of length {}",
                self.values.len()
            )));
        }
        Ok(SignSequence {
            sigma: self.sigma,
            values: self.values[start..end].to_vec(),
            seed: self.seed,
        })
    }

    /// Finite section of size `len + 1`: superdiagonal 1, diagonal 0, subdiagonal `h`.
    pub fn fz_section(&self) -> BandMatrix {
        let n = self.values.len() + 1;
        let sup = vec![Complex64::new(1.0, 0.0); n - 1];
        let diag = vec![Complex64::new(0.0, 0.0); n];
        let sub: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        build_tridiagonal_section(&sup, &diag, &sub).expect("consistent lengths")
    }
}

/// Draws `n` i.i.d. fair ±σ values.
pub fn sample_sign_sequence(n: usize, sigma: f64, seed: u64) -> Result<SignSequence> {
    sample_sign_sequence_stream(n, sigma, seed, 0)
}

/// As [`sample_sign_sequence`] but on an independent stream of the same seed.
pub fn sample_sign_sequence_stream(n: usize, sigma: f64, seed: u64, stream: u64) -> Result<SignSequence> {
    check_sigma(sigma)?;
    if n == 0 {
        return Err(SpecError::domain("sequence length must be positive"));
    }
    let mut rng = rng_for(seed, stream);
    let values = (0..n).map(|_| if rng.gen::<bool>() { sigma } else { -sigma }).collect();
    Ok(SignSequence { sigma, values, seed: Some(seed) })
}

/// Square banded matrix stored by diagonals; band `k` holds entries `(i, i + k)`
/// indexed by `min(i, i + k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    dim: usize,
    bands: BTreeMap<i64, Vec<Complex64>>,
}

impl BandMatrix {
    pub fn new(dim: usize, bands: BTreeMap<i64, Vec<Complex64>>) -> Result<Self> {
        if dim == 0 {
            return Err(SpecError::shape("dimension must be positive"));
        }
        for (&k, v) in &bands {
            let expected = dim as i64 - k.abs();
            if expected <= 0 || v.len() as i64 != expected {
                return Err(SpecError::shape(format!(
                    "band {k} has length {}, expected {}",
                    v.len(),
                    expected.max(0)
                )));
            }
        }
        Ok(BandMatrix { dim, bands })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offsets(&self) -> Vec<i64> {
        self.bands.keys().copied().collect()
    }

    pub fn band(&self, k: i64) -> Option<&[Complex64]> {
        self.bands.get(&k).map(|v| v.as_slice())
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let k = j as i64 - i as i64;
        match self.bands.get(&k) {
            Some(v) if i < self.dim && j < self.dim => v[i.min(j)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.bands.keys().all(|k| k.abs() <= 1)
    }

    /// Leading principal `m × m` block.
    pub fn leading(&self, m: usize) -> Result<BandMatrix> {
        if m == 0 || m > self.dim {
            return Err(SpecError::shape(format!("cannot take a {m}-section of a {}-matrix", self.dim)));
        }
        let bands = self
            .bands
            .iter()
            .filter(|(k, _)| (k.unsigned_abs() as usize) < m)
            .map(|(&k, v)| (k, v[..m - k.unsigned_abs() as usize].to_vec()))
            .collect();
        BandMatrix::new(m, bands)
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim);
        for (&k, v) in &self.bands {
            for (idx, &z) in v.iter().enumerate() {
                let (i, j) = if k >= 0 { (idx, idx + k as usize) } else { (idx + (-k) as usize, idx) };
                m[(i, j)] = z;
            }
        }
        m
    }
}

/// Tridiagonal section with `sup[i] = A[i][i+1]`, `diag[i] = A[i][i]`, `sub[i] = A[i+1][i]`.
pub fn build_tridiagonal_section(sup: &[Complex64], diag: &[Complex64], sub: &[Complex64]) -> Result<BandMatrix> {
    let n = diag.len();
    if n == 0 {
        return Err(SpecError::shape("diagonal must be non-empty"));
    }
    if sup.len() + 1 != n || sub.len() + 1 != n {
        return Err(SpecError::shape(format!(
            "off-diagonal lengths ({}, {}) do not match diagonal length {n}",
            sup.len(),
            sub.len()
        )));
    }
    let mut bands = BTreeMap::new();
    bands.insert(0, diag.to_vec());
    if n > 1 {
        bands.insert(1, sup.to_vec());
        bands.insert(-1, sub.to_vec());
    }
    BandMatrix::new(n, bands)
}

/// Even and odd blocks of the square of the random hopping section.
///
/// With `h_k = values[k-1]`, the even block has diagonal `h_{2j} + h_{2j-1}`,
/// subdiagonal `h_{2j-1} h_{2j-2}` and superdiagonal 1; the odd block has
/// diagonal `h_{2j+1} + h_{2j}` and subdiagonal `h_{2j} h_{2j-1}`. Only rows
/// whose entries are fully determined by the window are kept.
pub fn square_section_split(h: &SignSequence) -> Result<(BandMatrix, BandMatrix)> {
    let v = h.values();
    if v.len() < 4 {
        return Err(SpecError::shape(format!("need at least 4 values, got {}", v.len())));
    }
    let even = split_block(v);
    let odd = split_block(&v[1..]);
    Ok((even, odd))
}

fn split_block(v: &[f64]) -> BandMatrix {
    let m = v.len() / 2;
    let diag: Vec<Complex64> = (0..m).map(|r| Complex64::new(v[2 * r + 1] + v[2 * r], 0.0)).collect();
    let sub: Vec<Complex64> = (0..m - 1).map(|q| Complex64::new(v[2 * q + 2] * v[2 * q + 1], 0.0)).collect();
    let sup = vec![Complex64::new(1.0, 0.0); m - 1];
    build_tridiagonal_section(&sup, &diag, &sub).expect("consistent lengths")
}
