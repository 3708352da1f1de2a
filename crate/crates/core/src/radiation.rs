//! Array-factor far field of the finite leaky-wave aperture.
//!
//! Each cell is an isotropic radiator excited by the Bloch wave, so the
//! n-th term carries e^{−nγp}. The pattern is normalized to its peak.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cell::CrlhUnitCell;
use crate::dispersion::{bloch_at, free_space_wavenumber};
use crate::error::{invalid, Result};
use crate::geometry::CellGeometry;

pub const DEFAULT_THETA_STEP_DEG: f64 = 0.25;
/// Leakage per cell [Np] injected by [`Leakage::Injected`] by default.
pub const DEFAULT_LEAKAGE_NP_PER_CELL: f64 = 0.05;
/// Floor applied to the normalized magnitude [dB].
pub const MAGNITUDE_FLOOR_DB: f64 = -300.0;

/// Angles from −90° to +90° in `step_deg` increments.
pub fn theta_grid(step_deg: f64) -> Result<Vec<f64>> {
    if !(step_deg > 0.0 && step_deg <= 90.0) {
        return Err(invalid("theta step", format!("must be in (0, 90], got {step_deg}")));
    }
    let n = (90.0 / step_deg).round() as i64;
    let step = 90.0 / n as f64;
    Ok((-n..=n).map(|i| i as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiationPattern {
    /// [Hz]
    pub f: f64,
    pub theta_deg: Vec<f64>,
    /// Normalized so the maximum is exactly 0 dB.
    pub magnitude_db: Vec<f64>,
    pub main_beam_deg: f64,
    /// Width between the −3 dB crossings; a crossing outside the grid is
    /// replaced by the grid edge.
    pub beamwidth_3db_deg: f64,
}

/// Normalized array factor of `n_cells` cells carrying the Bloch wave `gamma`.
pub fn array_factor(
    gamma: Complex64,
    period: f64,
    n_cells: u32,
    f: f64,
    theta_grid: &[f64],
) -> Result<RadiationPattern> {
    if n_cells < 1 {
        return Err(invalid("array", "n_cells must be >= 1"));
    }
    if !(f > 0.0) {
        return Err(invalid("frequency", format!("must be > 0, got {f}")));
    }
    if theta_grid.is_empty() || theta_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("theta grid", "must be non-empty and strictly increasing"));
    }
    if theta_grid[0] < -90.0 || theta_grid[theta_grid.len() - 1] > 90.0 {
        return Err(invalid("theta grid", "angles must lie in [-90, 90]"));
    }
    let k0 = free_space_wavenumber(f);
    let magnitude: Vec<f64> = theta_grid
        .iter()
        .map(|&theta| {
            let spatial = k0 * theta.to_radians().sin() - gamma.im;
            (0..n_cells)
                .map(|n| {
                    let n = f64::from(n);
                    Complex64::from_polar((-n * gamma.re * period).exp(), n * period * spatial)
                })
                .sum::<Complex64>()
                .norm()
        })
        .collect();

    let (peak_idx, peak) =
        magnitude.iter().copied().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, m)| if m > best.1 { (i, m) } else { best },
        );
    let magnitude_db: Vec<f64> = magnitude
        .iter()
        .map(|&m| (20.0 * (m / peak).log10()).max(MAGNITUDE_FLOOR_DB))
        .collect();
    let beamwidth = beamwidth_3db(theta_grid, &magnitude_db, peak_idx);

    Ok(RadiationPattern {
        f,
        theta_deg: theta_grid.to_vec(),
        magnitude_db,
        main_beam_deg: theta_grid[peak_idx],
        beamwidth_3db_deg: beamwidth,
    })
}

fn beamwidth_3db(theta: &[f64], db: &[f64], peak: usize) -> f64 {
    const LEVEL: f64 = -3.0;
    let crossing = |i: usize, j: usize| {
        let t = (LEVEL - db[i]) / (db[j] - db[i]);
        theta[i] + t * (theta[j] - theta[i])
    };
    let left = (0..peak)
        .rev()
        .find(|&i| db[i] < LEVEL)
        .map(|i| crossing(i, i + 1))
        .unwrap_or(theta[0]);
    let right = (peak + 1..theta.len())
        .find(|&i| db[i] < LEVEL)
        .map(|i| crossing(i - 1, i))
        .unwrap_or(theta[theta.len() - 1]);
    right - left
}

/// Source of the attenuation used in pattern synthesis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Leakage {
    /// α exactly as the Bloch solution gives it.
    #[default]
    Bloch,
    /// Use at least this attenuation per cell [Np] where the Bloch α is smaller.
    Injected(f64),
}

impl Leakage {
    fn apply(self, alpha: f64, period: f64) -> f64 {
        match self {
            Leakage::Bloch => alpha,
            Leakage::Injected(np_per_cell) => alpha.max(np_per_cell / period),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BeamSample {
    pub f: f64,
    pub main_beam_deg: f64,
    pub beamwidth_3db_deg: f64,
}

pub fn pattern_at(
    cell: &CrlhUnitCell,
    geom: &CellGeometry,
    f: f64,
    theta: &[f64],
    leakage: Leakage,
) -> Result<RadiationPattern> {
    let bloch = bloch_at(cell, f)?;
    let gamma = Complex64::new(leakage.apply(bloch.alpha, cell.period), bloch.beta);
    array_factor(gamma, cell.period, geom.n_cells, f, theta)
}

pub fn main_beam_vs_frequency(
    cell: &CrlhUnitCell,
    geom: &CellGeometry,
    f_list: &[f64],
    leakage: Leakage,
) -> Result<Vec<BeamSample>> {
    if f_list.is_empty() {
        return Err(invalid("frequency list", "must not be empty"));
    }
    let theta = theta_grid(DEFAULT_THETA_STEP_DEG)?;
    f_list
        .par_iter()
        .map(|&f| {
            let p = pattern_at(cell, geom, f, &theta, leakage)?;
            Ok(BeamSample {
                f,
                main_beam_deg: p.main_beam_deg,
                beamwidth_3db_deg: p.beamwidth_3db_deg,
            })
        })
        .collect()
}
