//! Schur-test certificates for the rightmost point of real symmetric
//! tridiagonal operators, and their specialisation to the even and odd
//! blocks of the squared random hopping matrix.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Result, SpecError};
use crate::fz::{n_phi, FzParams};
use crate::numrange::{rotate_hermitian_part, SymTridiag};
use crate::operator::{square_section_split, SignSequence};

/// Absolute slack allowed in `η_j ≤ g_{j+1}(1 − g_j)`.
pub const CERT_SLACK: f64 = 1e-12;

/// The ratios `η_j = C_{j,j+1}² / ((N − C_jj)(N − C_{j+1,j+1}))`.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaSequence {
    pub bound: f64,
    pub etas: Vec<f64>,
    pub types: Option<Vec<u8>>,
}

/// A sequence `g_j ∈ [0, 1]` for the bound `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SzwarcCertificate {
    pub g: Vec<f64>,
    pub bound: f64,
}

pub fn eta_from_tridiag(c: &SymTridiag, n: f64) -> Result<EtaSequence> {
    if let Some(d) = c.diag().iter().find(|&&d| !(n > d)) {
        return Err(SpecError::domain(format!("bound {n} does not exceed diagonal entry {d}")));
    }
    let d = c.diag();
    let etas = c
        .offdiag()
        .iter()
        .enumerate()
        .map(|(j, e)| e * e / ((n - d[j]) * (n - d[j + 1])))
        .collect();
    Ok(EtaSequence { bound: n, etas, types: None })
}

/// Largest value of `η_j − g_{j+1}(1 − g_j)`; `-∞` for an empty sequence.
pub fn certificate_excess(eta: &EtaSequence, cert: &SzwarcCertificate) -> Result<f64> {
    if cert.g.len() != eta.etas.len() + 1 {
        return Err(SpecError::shape(format!(
            "certificate has {} entries, expected {}",
            cert.g.len(),
            eta.etas.len() + 1
        )));
    }
    if let Some(g) = cert.g.iter().find(|g| !(**g >= -CERT_SLACK && **g <= 1.0 + CERT_SLACK)) {
        return Err(SpecError::Invariant(format!("certificate entry {g} outside [0, 1]")));
    }
    Ok(eta
        .etas
        .iter()
        .enumerate()
        .map(|(j, e)| e - cert.g[j + 1] * (1.0 - cert.g[j]))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// True if `η_j ≤ g_{j+1}(1 − g_j)` for every `j` (up to [`CERT_SLACK`]).
pub fn check_certificate(eta: &EtaSequence, cert: &SzwarcCertificate) -> Result<bool> {
    Ok(certificate_excess(eta, cert)? <= CERT_SLACK)
}

/// `g_1 = 0`, `g_{j+1} = η_j / (1 − g_j)`; `None` once a term leaves `[0, 1]`.
pub fn greedy_certificate(eta: &EtaSequence) -> Option<SzwarcCertificate> {
    let mut g = Vec::with_capacity(eta.etas.len() + 1);
    g.push(0.0);
    for &e in &eta.etas {
        let prev = *g.last().unwrap();
        let next = if e == 0.0 { 0.0 } else { e / (1.0 - prev) };
        if !(0.0..=1.0).contains(&next) {
            return None;
        }
        g.push(next);
    }
    Some(SzwarcCertificate { g, bound: eta.bound })
}

/// `√η₁ + √η₂ − 1` for the 2-periodic operator with diagonal `(a, b)` and
/// off-diagonal `(c, d)`; zero exactly at `N = r_0`.
pub fn two_periodic_eta_residual(a: f64, b: f64, c: f64, d: f64, n: f64) -> Result<f64> {
    if !(n > a.max(b)) {
        return Err(SpecError::domain(format!("bound {n} must exceed max(a, b) = {}", a.max(b))));
    }
    let eta1 = c * c / ((n - a) * (n - b));
    let eta2 = d * d / ((n - b) * (n - a));
    Ok(eta1.sqrt() + eta2.sqrt() - 1.0)
}

/// Numerator of a case row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Numerator {
    /// `(1 + σ²)² − 4σ² cos² φ`
    P,
    /// `(1 − σ²)² + 4σ² cos² φ`
    Q,
}

/// The 16 cases `(h_{2j−1}, h_{2j}, h_{2j+1}, h_{2j+2})` in lexicographic
/// order with `+σ` first. Each row is `η = num / (4 (N − l·2σcosφ)(N − r·2σcosφ))`.
pub const FZ_CASES: [(Numerator, i8, i8); 16] = [
    (Numerator::Q, 1, 1),
    (Numerator::Q, 1, 0),
    (Numerator::P, 1, 0),
    (Numerator::P, 1, -1),
    (Numerator::P, 0, 1),
    (Numerator::P, 0, 0),
    (Numerator::Q, 0, 0),
    (Numerator::Q, 0, -1),
    (Numerator::Q, 0, 1),
    (Numerator::Q, 0, 0),
    (Numerator::P, 0, 0),
    (Numerator::P, 0, -1),
    (Numerator::P, -1, 1),
    (Numerator::P, -1, 0),
    (Numerator::Q, -1, 0),
    (Numerator::Q, -1, -1),
];

/// Case label in `1..=16` of four consecutive values.
pub fn fz_case(h: &[f64]) -> u8 {
    let bit = |x: f64| u8::from(x < 0.0);
    1 + 8 * bit(h[0]) + 4 * bit(h[1]) + 2 * bit(h[2]) + bit(h[3])
}

/// Case labels `t_j` of the even block, `j = 1..⌊len/2⌋ − 1`.
pub fn fz_types(h: &SignSequence) -> Vec<u8> {
    let v = h.values();
    let m = v.len() / 2;
    (0..m.saturating_sub(1)).map(|q| fz_case(&v[2 * q..2 * q + 4])).collect()
}

/// `η` of case `t` at bound `n`.
pub fn fz_case_eta(t: u8, phi: f64, sigma: f64, n: f64) -> f64 {
    let (num, l, r) = FZ_CASES[(t - 1) as usize];
    let c2 = 4.0 * sigma * sigma * phi.cos().powi(2);
    let s2 = sigma * sigma;
    let numer = match num {
        Numerator::P => (1.0 + s2).powi(2) - c2,
        Numerator::Q => (1.0 - s2).powi(2) + c2,
    };
    let w = 2.0 * sigma * phi.cos();
    numer / (4.0 * (n - l as f64 * w) * (n - r as f64 * w))
}

fn check_reduced(phi: f64) -> Result<()> {
    if (0.0..=FRAC_PI_2).contains(&phi) {
        Ok(())
    } else {
        Err(SpecError::domain(format!("angle {phi} must be reduced to [0, π/2]")))
    }
}

/// η-sequence of the even block of `A²` at angle `φ ∈ [0, π/2]`, from the case table.
pub fn fz_eta_sequence(h: &SignSequence, phi: f64) -> Result<EtaSequence> {
    check_reduced(phi)?;
    let sigma = h.sigma();
    let n = n_phi(phi, &FzParams::new(sigma)?);
    let types = fz_types(h);
    let etas = types.iter().map(|&t| fz_case_eta(t, phi, sigma, n)).collect();
    Ok(EtaSequence { bound: n, etas, types: Some(types) })
}

/// Which prescription applies at `(σ, φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    /// `φ ≥ φ*`, bound `1 + σ²`.
    Upper { low: f64, high: f64 },
    /// `φ < φ*` with `P > (N − 2σcosφ)N`.
    Lower { low: f64, high: f64 },
    /// Every η is at most ¼; `g ≡ ½` suffices.
    Trivial,
}

pub fn fz_regime(phi: f64, sigma: f64) -> Result<Regime> {
    check_reduced(phi)?;
    let params = FzParams::new(sigma)?;
    let s = 1.0 + sigma * sigma;
    let w = 2.0 * sigma * phi.cos();
    if phi >= params.phi_star {
        return Ok(Regime::Upper { low: 0.5 * (s - w) / s, high: 0.5 * (s + w) / s });
    }
    let n = n_phi(phi, &params);
    let p = s * s - w * w;
    let mn = (n - w) * n;
    if p > mn {
        let ratio = p / mn;
        Ok(Regime::Lower { low: 1.0 - 0.5 * ratio, high: 0.5 * ratio })
    } else {
        Ok(Regime::Trivial)
    }
}

/// Prescribed certificate for the case labels `types`, with a flag telling
/// whether a lookahead or lookback chain ran off the window.
pub fn fz_prescribed_g(types: &[u8], phi: f64, sigma: f64) -> Result<(SzwarcCertificate, bool)> {
    if let Some(t) = types.iter().find(|t| !(1..=16).contains(*t)) {
        return Err(SpecError::domain(format!("case label {t} outside 1..=16")));
    }
    let regime = fz_regime(phi, sigma)?;
    let n = n_phi(phi, &FzParams::new(sigma)?);
    let len = types.len();
    let (low, high) = match regime {
        Regime::Upper { low, high } | Regime::Lower { low, high } => (low, high),
        Regime::Trivial => return Ok((SzwarcCertificate { g: vec![0.5; len + 1], bound: n }, false)),
    };
    // to_five[i]: t[i..k] are all 6 and t[k] = 5 for some k ≥ i
    let mut to_five = vec![false; len + 1];
    let mut off_end = vec![false; len + 1];
    off_end[len] = true;
    for i in (0..len).rev() {
        match types[i] {
            5 => to_five[i] = true,
            6 => {
                to_five[i] = to_five[i + 1];
                off_end[i] = off_end[i + 1];
            }
            _ => {}
        }
    }
    // after3[i]: t[i] = 11 and the run of 11s ending at i is preceded by a 3
    let mut after3 = vec![false; len];
    let mut off_start = vec![false; len];
    for i in 0..len {
        if types[i] == 11 {
            if i == 0 {
                off_start[i] = true;
            } else {
                after3[i] = types[i - 1] == 3 || after3[i - 1];
                off_start[i] = types[i - 1] == 11 && off_start[i - 1];
            }
        }
    }
    let mut boundary = off_end[0];
    let mut g = Vec::with_capacity(len + 1);
    g.push(if to_five[0] { low } else { 0.5 });
    for i in 0..len {
        let t = types[i];
        let value = if matches!(t, 2 | 6 | 10 | 14) && to_five[i + 1] {
            low
        } else if t == 3 || (t == 11 && after3[i]) {
            high
        } else {
            if matches!(t, 2 | 6 | 10 | 14) && off_end[i + 1] {
                boundary = true;
            }
            if t == 11 && off_start[i] {
                boundary = true;
            }
            0.5
        };
        g.push(value);
    }
    Ok((SzwarcCertificate { g, bound: n }, boundary))
}

/// Outcome of certifying one sign window.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifyReport {
    pub certified: bool,
    pub bound: f64,
    pub max_slack: f64,
    pub boundary: bool,
    pub wiener_path: bool,
}

/// Reduces `φ` to `[0, π/2]`; the flag tells whether the signs of `h` must be reversed.
pub fn reduce_fz_angle(phi: f64) -> (f64, bool) {
    let p = phi.rem_euclid(2.0 * PI);
    if p <= FRAC_PI_2 {
        (p, false)
    } else if p <= PI {
        (PI - p, true)
    } else if p <= 1.5 * PI {
        (p - PI, true)
    } else {
        (2.0 * PI - p, false)
    }
}

/// Rotated real symmetric forms `E(φ)` of the even and odd blocks of `A²`.
pub fn fz_rotated_blocks(h: &SignSequence, phi: f64) -> Result<(SymTridiag, SymTridiag)> {
    let (c, d) = square_section_split(h)?;
    Ok((rotate_hermitian_part(&c, phi)?, rotate_hermitian_part(&d, phi)?))
}

/// Certifies `r_φ ≤ N(φ)` for both blocks of the squared section, `φ ∈ [0, π/2]`.
pub fn fz_certify_window(h: &SignSequence, phi: f64) -> Result<CertifyReport> {
    check_reduced(phi)?;
    if h.len() < 4 {
        return Err(SpecError::shape("window needs at least 4 values"));
    }
    let sigma = h.sigma();
    let params = FzParams::new(sigma)?;
    let bound = n_phi(phi, &params);
    let odd = h.window(1, h.len())?;
    if sigma == 1.0 && phi == 0.0 {
        let (c, d) = fz_rotated_blocks(h, phi)?;
        let w = c.wiener_bound().max(d.wiener_bound());
        return Ok(CertifyReport {
            certified: w <= bound + CERT_SLACK,
            bound,
            max_slack: w - bound,
            boundary: false,
            wiener_path: true,
        });
    }
    let mut max_slack = f64::NEG_INFINITY;
    let mut boundary = false;
    for block in [h, &odd] {
        let eta = fz_eta_sequence(block, phi)?;
        let (cert, b) = fz_prescribed_g(eta.types.as_deref().unwrap_or(&[]), phi, sigma)?;
        boundary |= b;
        max_slack = max_slack.max(certificate_excess(&eta, &cert)?);
    }
    Ok(CertifyReport { certified: max_slack <= CERT_SLACK, bound, max_slack, boundary, wiener_path: false })
}

/// As [`fz_certify_window`] for any angle, through the symmetry reduction.
pub fn fz_certify_any_angle(h: &SignSequence, phi: f64) -> Result<CertifyReport> {
    let (p, flip) = reduce_fz_angle(phi);
    if flip {
        fz_certify_window(&h.flipped(), p)
    } else {
        fz_certify_window(h, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numrange::symtridiag_max_eig;
    use crate::operator::sample_sign_sequence_stream;
    use proptest::prelude::*;

    fn sym(diag: Vec<f64>, off: Vec<f64>) -> SymTridiag {
        SymTridiag::new(diag, off).unwrap()
    }

    fn all_signs(n: usize) -> Vec<Vec<i8>> {
        (0..1u32 << n)
            .map(|m| (0..n).map(|k| if m >> k & 1 == 1 { -1 } else { 1 }).collect())
            .collect()
    }

    #[test]
    fn eta_examples() {
        let e = eta_from_tridiag(&sym(vec![0.0; 5], vec![1.0; 4]), 2.0).unwrap();
        assert!(e.etas.iter().all(|&x| x == 0.25));
        let e = eta_from_tridiag(&sym(vec![0.5, -1.0, 0.2], vec![2.0, 3.0]), 1e6).unwrap();
        assert!(e.etas.iter().all(|&x| x < 1e-11));
        assert!(eta_from_tridiag(&sym(vec![0.0, 3.0], vec![1.0]), 3.0).is_err());
    }

    #[test]
    fn two_periodic_eta_at_exact_abscissa() {
        // D₂-type block at σ = 1, φ = π/2: (a, b, c, d) = (0, 0, 1, 1), r₀ = 2
        let c = sym(vec![0.0; 6], vec![1.0; 5]);
        let e = eta_from_tridiag(&c, 2.0).unwrap();
        assert!((e.etas[0].sqrt() + e.etas[1].sqrt() - 1.0).abs() < 1e-15);
        assert_eq!(two_periodic_eta_residual(0.0, 0.0, 1.0, 1.0, 2.0).unwrap(), 0.0);
        let r = two_periodic_eta_residual(0.0, 0.0, 1.0, 1.0, 3.0).unwrap();
        assert!((r - (2.0 / 3.0 - 1.0)).abs() < 1e-15);
        assert!(two_periodic_eta_residual(2.0, 0.0, 1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn certificate_checks() {
        let eta = EtaSequence { bound: 2.0, etas: vec![0.25; 9], types: None };
        let half = SzwarcCertificate { g: vec![0.5; 10], bound: 2.0 };
        assert!(check_certificate(&eta, &half).unwrap());
        let eta3 = EtaSequence { bound: 2.0, etas: vec![0.3; 9], types: None };
        assert!(!check_certificate(&eta3, &half).unwrap());
        let bad = SzwarcCertificate { g: vec![1.5; 10], bound: 2.0 };
        assert!(matches!(check_certificate(&eta, &bad), Err(SpecError::Invariant(_))));
        let short = SzwarcCertificate { g: vec![0.5; 3], bound: 2.0 };
        assert!(check_certificate(&eta, &short).is_err());
    }

    #[test]
    fn greedy_examples() {
        let quarter = EtaSequence { bound: 1.0, etas: vec![0.25; 200], types: None };
        let cert = greedy_certificate(&quarter).unwrap();
        assert_eq!(cert.g[0], 0.0);
        assert!(cert.g.windows(2).all(|w| w[1] > w[0]));
        assert!(cert.g.iter().all(|&g| g < 0.5));
        assert!(check_certificate(&quarter, &cert).unwrap());

        let over = EtaSequence { bound: 1.0, etas: vec![0.26; 200], types: None };
        assert!(greedy_certificate(&over).is_none());

        let zero = EtaSequence { bound: 1.0, etas: vec![0.0; 5], types: None };
        assert!(greedy_certificate(&zero).unwrap().g.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn case_labels_of_reference_sequence() {
        let h = SignSequence::from_signs(0.5, &[1, -1, -1, 1, 1, 1, 1, -1, 1, -1]).unwrap();
        assert_eq!(fz_types(&h), vec![7, 9, 2, 6]);
    }

    #[test]
    fn table_rows_at_right_angle() {
        let n = 2.0;
        assert!((fz_case_eta(6, FRAC_PI_2, 1.0, n) - 0.25).abs() < 1e-15);
        assert!(fz_case_eta(7, FRAC_PI_2, 1.0, n).abs() < 1e-15);
    }

    /// Case rows written out longhand for both angle ranges, used as an independent oracle.
    fn literal_table(t: u8, phi: f64, s: f64) -> f64 {
        let c = phi.cos();
        let pp = (1.0 + s * s).powi(2) - 4.0 * s * s * c * c;
        let qq = (1.0 - s * s).powi(2) + 4.0 * s * s * c * c;
        let star = (s / (1.0 + s * s)).acos();
        if phi >= star {
            let m = 1.0 + s * s - 2.0 * s * c;
            let p = 1.0 + s * s + 2.0 * s * c;
            let ss = 1.0 + s * s;
            [
                qq / (4.0 * m * m),
                qq / (4.0 * m * ss),
                pp / (4.0 * m * ss),
                pp / (4.0 * m * p),
                pp / (4.0 * m * ss),
                pp / (4.0 * ss * ss),
                qq / (4.0 * ss * ss),
                qq / (4.0 * p * ss),
                qq / (4.0 * m * ss),
                qq / (4.0 * ss * ss),
                pp / (4.0 * ss * ss),
                pp / (4.0 * p * ss),
                pp / (4.0 * m * p),
                pp / (4.0 * p * ss),
                qq / (4.0 * p * ss),
                qq / (4.0 * p * p),
            ][(t - 1) as usize]
        } else {
            let n = 2.0 * s * c + ((1.0 + s * s).powi(2) * c * c + (1.0 - s * s).powi(2) * (1.0 - c * c)).sqrt();
            let m = n - 2.0 * s * c;
            let p = n + 2.0 * s * c;
            [
                0.25,
                qq / (4.0 * m * n),
                pp / (4.0 * m * n),
                pp / (4.0 * m * p),
                pp / (4.0 * m * n),
                pp / (4.0 * n * n),
                qq / (4.0 * n * n),
                qq / (4.0 * p * n),
                qq / (4.0 * m * n),
                qq / (4.0 * n * n),
                pp / (4.0 * n * n),
                pp / (4.0 * p * n),
                pp / (4.0 * m * p),
                pp / (4.0 * p * n),
                qq / (4.0 * p * n),
                qq / (4.0 * p * p),
            ][(t - 1) as usize]
        }
    }

    #[test]
    fn table_matches_longhand_rows() {
        for k in 1..=10 {
            let s = k as f64 / 10.0;
            let params = FzParams::new(s).unwrap();
            for i in 0..=90 {
                let phi = FRAC_PI_2 * i as f64 / 90.0;
                let n = n_phi(phi, &params);
                for t in 1..=16u8 {
                    let a = fz_case_eta(t, phi, s, n);
                    let b = literal_table(t, phi, s);
                    assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()), "t={t} s={s} phi={phi}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn table_matches_rotated_block_etas() {
        for (k, &s) in [0.2, 0.5, 0.9, 1.0].iter().enumerate() {
            for &phi in &[0.0, 0.3, 0.9, 1.2, FRAC_PI_2] {
                if s == 1.0 && phi == 0.0 {
                    continue;
                }
                let h = sample_sign_sequence_stream(200, s, 9, k as u64).unwrap();
                let eta = fz_eta_sequence(&h, phi).unwrap();
                let (c, _) = fz_rotated_blocks(&h, phi).unwrap();
                let direct = eta_from_tridiag(&c, eta.bound).unwrap();
                assert_eq!(direct.etas.len(), eta.etas.len());
                for (a, b) in direct.etas.iter().zip(&eta.etas) {
                    assert!((a - b).abs() < 1e-13, "s={s} phi={phi}");
                }
            }
        }
    }

    #[test]
    fn table_bounds() {
        for k in 1..=10 {
            let s = k as f64 / 10.0;
            let star = FzParams::new(s).unwrap().phi_star;
            let grid = |a: f64, b: f64| (0..181).map(move |i| a + (b - a) * i as f64 / 180.0);
            for phi in grid(0.0, star).chain(grid(star, FRAC_PI_2)) {
                let n = n_phi(phi, &FzParams::new(s).unwrap());
                for t in 1..=16u8 {
                    let e = fz_case_eta(t, phi, s, n);
                    assert!(e <= 0.5 + 1e-12, "t={t} s={s} phi={phi} eta={e}");
                    if t != 3 && t != 5 {
                        assert!(e <= 0.25 + 1e-12, "t={t} s={s} phi={phi} eta={e}");
                    }
                }
            }
        }
    }

    #[test]
    fn prescribed_g_examples() {
        let s = 0.6;
        let phi = 1.3;
        let (cert, _) = fz_prescribed_g(&[1; 10], phi, s).unwrap();
        assert!(cert.g[1..].iter().all(|&g| g == 0.5));
        let (cert, _) = fz_prescribed_g(&[3, 9, 1], phi, s).unwrap();
        let w = 2.0 * s * phi.cos();
        let ss = 1.0 + s * s;
        assert!((cert.g[1] - 0.5 * (ss + w) / ss).abs() < 1e-15);

        assert_eq!(fz_regime(0.2, s).unwrap(), Regime::Trivial);
        let phi2 = 1.05;
        assert!(phi2 < FzParams::new(s).unwrap().phi_star);
        let (cert, _) = fz_prescribed_g(&[3, 9, 1], phi2, s).unwrap();
        let n = n_phi(phi2, &FzParams::new(s).unwrap());
        let w2 = 2.0 * s * phi2.cos();
        let expect = 0.5 * (ss * ss - w2 * w2) / ((n - w2) * n);
        assert!(matches!(fz_regime(phi2, s).unwrap(), Regime::Lower { .. }));
        assert!((cert.g[1] - expect).abs() < 1e-15);
    }

    #[test]
    fn prescribed_g_chains() {
        let s = 0.5;
        let phi = 1.4;
        let Regime::Upper { low, high } = fz_regime(phi, s).unwrap() else { panic!() };
        // g₁ from a leading run of 6s ending in 5
        let (cert, b) = fz_prescribed_g(&[6, 6, 5, 1], phi, s).unwrap();
        assert_eq!(cert.g[..3], [low, low, low]);
        assert_eq!(cert.g[3], 0.5);
        assert!(!b);
        // 6-run running off the window
        let (cert, b) = fz_prescribed_g(&[2, 6, 6], phi, s).unwrap();
        assert!(cert.g.iter().all(|&g| g == 0.5));
        assert!(b);
        // 3 followed by 11s
        let (cert, _) = fz_prescribed_g(&[3, 11, 11, 10, 5], phi, s).unwrap();
        assert_eq!(cert.g[1..4], [high, high, high]);
        assert_eq!(cert.g[4], low);
    }

    #[test]
    fn certify_at_sixty_degrees_for_all_short_windows() {
        let phi = PI / 3.0;
        for signs in all_signs(12) {
            let h = SignSequence::from_signs(1.0, &signs).unwrap();
            let eta = fz_eta_sequence(&h, phi).unwrap();
            let (cert, _) = fz_prescribed_g(eta.types.as_ref().unwrap(), phi, 1.0).unwrap();
            assert!(check_certificate(&eta, &cert).unwrap(), "{signs:?}");
        }
    }

    #[test]
    fn certify_examples() {
        let h = sample_sign_sequence_stream(2000, 0.5, 4, 0).unwrap();
        let rep = fz_certify_window(&h, 0.3).unwrap();
        assert!(rep.certified);
        let (c, d) = fz_rotated_blocks(&h, 0.3).unwrap();
        for e in [c, d] {
            assert!(symtridiag_max_eig(&e, 1e-12).unwrap() <= rep.bound + 1e-8);
        }
        let h1 = sample_sign_sequence_stream(500, 1.0, 4, 1).unwrap();
        let rep = fz_certify_window(&h1, 0.0).unwrap();
        assert!(rep.certified && rep.wiener_path);
        assert_eq!(rep.bound, 4.0);
        assert!(fz_certify_window(&h1, 2.0).is_err());
    }

    #[test]
    fn angle_reduction() {
        let h = sample_sign_sequence_stream(400, 0.7, 8, 0).unwrap();
        for &phi in &[0.2, 1.0, 1.5] {
            for other in [PI - phi, PI + phi, 2.0 * PI - phi] {
                let (p, flip) = reduce_fz_angle(other);
                assert!((p - phi).abs() < 1e-12);
                let hr = if flip { h.flipped() } else { h.clone() };
                let (direct, _) = fz_rotated_blocks(&h, other).unwrap();
                let (reduced, _) = fz_rotated_blocks(&hr, phi).unwrap();
                let a = symtridiag_max_eig(&direct, 1e-12).unwrap();
                let b = symtridiag_max_eig(&reduced, 1e-12).unwrap();
                assert!((a - b).abs() < 1e-9, "phi={phi} other={other}");
            }
            assert!(fz_certify_any_angle(&h, PI - phi).unwrap().certified);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn prescription_is_valid_and_sound(
            signs in prop::collection::vec(prop::bool::ANY, 4..120),
            k in 1usize..=10,
            phi in 0.0f64..FRAC_PI_2,
        ) {
            let s = k as f64 / 10.0;
            let signs: Vec<i8> = signs.into_iter().map(|b| if b { 1 } else { -1 }).collect();
            let h = SignSequence::from_signs(s, &signs).unwrap();
            let eta = fz_eta_sequence(&h, phi).unwrap();
            let (cert, _) = fz_prescribed_g(eta.types.as_ref().unwrap(), phi, s).unwrap();
            prop_assert!(cert.g.iter().all(|&g| (0.0..=1.0).contains(&g)));
            prop_assert!(check_certificate(&eta, &cert).unwrap());
            let (c, _) = fz_rotated_blocks(&h, phi).unwrap();
            prop_assert!(symtridiag_max_eig(&c, 1e-12).unwrap() <= eta.bound + 1e-8);
        }

        #[test]
        fn greedy_certificates_are_sound(diag in prop::collection::vec(-1.0f64..1.0, 2..40), off in 0.0f64..1.0, slack in 0.0f64..0.5) {
            let n = diag.len();
            let c = SymTridiag::new(diag, vec![off; n - 1]).unwrap();
            let r0 = symtridiag_max_eig(&c, 1e-12).unwrap();
            let bound = r0 + slack + 1e-9;
            let eta = eta_from_tridiag(&c, bound).unwrap();
            let cert = greedy_certificate(&eta);
            prop_assert!(cert.is_some());
            prop_assert!(check_certificate(&eta, &cert.unwrap()).unwrap());
            let below = r0 - 0.05;
            if c.diag().iter().all(|&d| below > d) {
                let eta = eta_from_tridiag(&c, below).unwrap();
                prop_assert!(greedy_certificate(&eta).is_none());
            }
        }
    }
}
