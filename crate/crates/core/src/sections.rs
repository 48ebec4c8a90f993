//! Monte-Carlo finite sections compared against closed-form supports.

use rayon::prelude::*;

use crate::error::{Result, SpecError};
use crate::fz::{n_phi, FzParams};
use crate::numrange::{numerical_abscissa_section, DEFAULT_BISECTION_TOL};
use crate::operator::{rng_for, sample_sign_sequence_stream, square_section_split, BandMatrix, TridiagSpec};

/// Slack allowed between a section abscissa and the closed-form support.
pub const UPPER_BOUND_SLACK: f64 = 1e-8;

/// Sampled model.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionModel {
    /// Random tridiagonal sections with entries from the alphabets.
    Tridiag(TridiagSpec),
    /// Even and odd blocks of the square of a random hopping section.
    FzSquared { sigma: f64 },
}

impl SectionModel {
    /// Closed-form support in direction `phi`.
    pub fn closed_form(&self, phi: f64) -> Result<f64> {
        match self {
            SectionModel::Tridiag(spec) => Ok(spec.support(phi)),
            SectionModel::FzSquared { sigma } => Ok(n_phi(phi, &FzParams::new(*sigma)?)),
        }
    }

    /// Sections of sizes `sizes` from one trial, nested in one another.
    fn nested_sections(&self, sizes: &[usize], seed: u64, trial: u64) -> Result<Vec<Vec<BandMatrix>>> {
        let n_max = *sizes.last().expect("non-empty sizes");
        match self {
            SectionModel::Tridiag(spec) => {
                let full = spec.sample_section(n_max, &mut rng_for(seed, trial))?;
                sizes.iter().map(|&n| Ok(vec![full.leading(n)?])).collect()
            }
            SectionModel::FzSquared { sigma } => {
                let h = sample_sign_sequence_stream(n_max.max(4), *sigma, seed, trial)?;
                let (c, d) = square_section_split(&h)?;
                sizes
                    .iter()
                    .map(|&n| {
                        let m = (n / 2).max(1);
                        Ok(vec![c.leading(m.min(c.dim()))?, d.leading(m.min(d.dim()))?])
                    })
                    .collect()
            }
        }
    }
}

fn check_sizes(sizes: &[usize], trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(SpecError::domain("trials must be at least 1"));
    }
    if sizes.is_empty() || sizes[0] < 2 {
        return Err(SpecError::domain("section sizes must be at least 2"));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SpecError::domain("section sizes must be strictly increasing"));
    }
    Ok(())
}

/// Abscissae per trial (outer) and size (inner).
fn trial_table(model: &SectionModel, phi: f64, sizes: &[usize], trials: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    check_sizes(sizes, trials)?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            model
                .nested_sections(sizes, seed, t)?
                .iter()
                .map(|blocks| {
                    blocks.iter().try_fold(f64::NEG_INFINITY, |m, b| {
                        Ok(m.max(numerical_abscissa_section(b, phi, DEFAULT_BISECTION_TOL)?))
                    })
                })
                .collect()
        })
        .collect()
}

/// One angle of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub phi: f64,
    pub closed_form: f64,
    pub best_section: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
}

impl SweepRow {
    /// `best_section − closed_form`; non-positive up to slack.
    pub fn excess(&self) -> f64 {
        self.best_section - self.closed_form
    }
}

/// Best section abscissa over `trials` sampled sections of size `n`.
pub fn monte_carlo_support(model: &SectionModel, phi: f64, n: usize, trials: usize, seed: u64) -> Result<SweepRow> {
    let table = trial_table(model, phi, &[n], trials, seed)?;
    let best_section = table.iter().map(|r| r[0]).fold(f64::NEG_INFINITY, f64::max);
    Ok(SweepRow { phi, closed_form: model.closed_form(phi)?, best_section, n, trials, seed })
}

/// Rows of a sweep over an angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub phi_grid: Vec<f64>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn max_excess(&self) -> f64 {
        self.rows.iter().map(SweepRow::excess).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Every row satisfies `best_section ≤ closed_form + 1e-8`.
    pub fn upper_bound_holds(&self) -> bool {
        self.max_excess() <= UPPER_BOUND_SLACK
    }
}

pub fn sweep(model: &SectionModel, phi_grid: &[f64], n: usize, trials: usize, seed: u64) -> Result<SweepResult> {
    let rows = phi_grid
        .iter()
        .map(|&phi| monte_carlo_support(model, phi, n, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { phi_grid: phi_grid.to_vec(), rows })
}

/// Best abscissa per size for nested sections.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub phi: f64,
    pub closed_form: f64,
    pub sizes: Vec<usize>,
    pub best: Vec<f64>,
    /// Largest decrease seen along any single trial as the size grows.
    pub max_decrease: f64,
}

impl ConvergenceTable {
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.max_decrease <= slack && self.best.windows(2).all(|w| w[1] >= w[0] - slack)
    }

    pub fn gap(&self) -> f64 {
        self.closed_form - self.best.last().copied().unwrap_or(f64::NAN)
    }
}

pub fn convergence_study(
    model: &SectionModel,
    phi: f64,
    sizes: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ConvergenceTable> {
    let table = trial_table(model, phi, sizes, trials, seed)?;
    let best = (0..sizes.len())
        .map(|i| table.iter().map(|r| r[i]).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let max_decrease = table
        .iter()
        .flat_map(|r| r.windows(2).map(|w| w[0] - w[1]))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ConvergenceTable { phi, closed_form: model.closed_form(phi)?, sizes: sizes.to_vec(), best, max_decrease })
}

/// Best abscissae of one-sided and centred random hopping sections of size
/// `n` cut from the same sign sequences of length `2n`.
pub fn one_and_two_sided(sigma: f64, phi: f64, n: usize, trials: usize, seed: u64) -> Result<(f64, f64)> {
    if n < 2 || trials == 0 {
        return Err(SpecError::domain("need n >= 2 and at least one trial"));
    }
    let pairs = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let h = sample_sign_sequence_stream(2 * n, sigma, seed, t)?;
            let one = h.window(n, 2 * n - 1)?.fz_section();
            let two = h.window(n / 2, n / 2 + n - 1)?.fz_section();
            Ok((
                numerical_abscissa_section(&one, phi, DEFAULT_BISECTION_TOL)?,
                numerical_abscissa_section(&two, phi, DEFAULT_BISECTION_TOL)?,
            ))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    Ok(pairs.iter().fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |(a, b), &(x, y)| (a.max(x), b.max(y))))
}
