//! Bloch analysis of the periodic cell: dispersion, transition frequency and
//! the phase-constant to beam-angle map.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cell::CrlhUnitCell;
use crate::error::{invalid, CrlhError, Result};
use crate::geometry::C0;
use crate::network::{unit_cell_abcd, TwoPortAbcd};

/// Absolute tolerance on the transition frequency [Hz].
pub const TRANSITION_TOL_HZ: f64 = 1e3;

/// Slack on |Re (A+D)/2| > 1 before a sample counts as a stop band.
const STOPBAND_TOL: f64 = 1e-12;

pub fn free_space_wavenumber(f: f64) -> f64 {
    2.0 * PI * f / C0
}

/// Complex Bloch propagation constant γ = α + jβ of one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochConstant {
    /// [rad/m], on the principal branch |β|p ≤ π.
    pub beta: f64,
    /// [Np/m], never negative.
    pub alpha: f64,
    /// (A + D) / 2 of the cell matrix.
    pub half_trace: Complex64,
}

impl BlochConstant {
    pub fn gamma(&self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }

    pub fn in_stopband(&self) -> bool {
        self.half_trace.re.abs() > 1.0 + STOPBAND_TOL
    }
}

/// Forward Bloch-wave impedance B / (e^{γp} − A); its real part is the sign of the power flow.
fn bloch_impedance(m: &TwoPortAbcd, gamma_p: Complex64) -> Complex64 {
    m.b / (gamma_p.exp() - m.a)
}

/// Solves cosh(γp) = (A + D)/2 for the wave that carries power toward +z.
///
/// Lossy solutions are selected by α ≥ 0. Lossless pass-band solutions have
/// two candidates ±β; the one whose Bloch impedance has a positive real part
/// is kept, which makes β negative in the left-handed band.
pub fn bloch_gamma(m: &TwoPortAbcd, period: f64) -> BlochConstant {
    let t = 0.5 * m.trace();
    if t.im == 0.0 {
        let x = t.re;
        let (alpha_p, beta_p) = if x > 1.0 {
            (x.acosh(), 0.0)
        } else if x < -1.0 {
            ((-x).acosh(), PI)
        } else {
            let theta = x.acos();
            let forward = bloch_impedance(m, Complex64::new(0.0, theta));
            if theta > 0.0 && theta < PI && forward.re < 0.0 {
                (0.0, -theta)
            } else {
                (0.0, theta)
            }
        };
        return BlochConstant {
            beta: beta_p / period,
            alpha: alpha_p / period,
            half_trace: t,
        };
    }

    let mut g = t.acosh();
    if g.re < 0.0 {
        g = -g;
    }
    if g.im <= -PI {
        g.im += 2.0 * PI;
    } else if g.im > PI {
        g.im -= 2.0 * PI;
    }
    BlochConstant {
        beta: g.im / period,
        alpha: g.re / period,
        half_trace: t,
    }
}

pub fn bloch_at(cell: &CrlhUnitCell, f: f64) -> Result<BlochConstant> {
    Ok(bloch_gamma(&unit_cell_abcd(cell, f)?, cell.period))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    LeftHandedLeaky,
    RightHandedLeaky,
    GuidedSlowWave,
    Evanescent,
}

impl Region {
    pub fn is_leaky(self) -> bool {
        matches!(self, Region::LeftHandedLeaky | Region::RightHandedLeaky)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::LeftHandedLeaky => "LeftHandedLeaky",
            Region::RightHandedLeaky => "RightHandedLeaky",
            Region::GuidedSlowWave => "GuidedSlowWave",
            Region::Evanescent => "Evanescent",
        }
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionPoint {
    /// [Hz]
    pub f: f64,
    /// [rad/m]
    pub beta: f64,
    /// [Np/m]
    pub alpha: f64,
    /// [rad/m]
    pub k0: f64,
    pub region: Region,
}

impl DispersionPoint {
    pub fn from_bloch(f: f64, bloch: &BlochConstant) -> Self {
        let k0 = free_space_wavenumber(f);
        let region = if bloch.in_stopband() {
            Region::Evanescent
        } else if bloch.beta.abs() < k0 {
            if bloch.beta < 0.0 {
                Region::LeftHandedLeaky
            } else {
                Region::RightHandedLeaky
            }
        } else {
            Region::GuidedSlowWave
        };
        Self {
            f,
            beta: bloch.beta,
            alpha: bloch.alpha,
            k0,
            region,
        }
    }

    pub fn beta_p_over_pi(&self, period: f64) -> f64 {
        self.beta * period / PI
    }

    /// Beam angle [deg] for fast-wave samples.
    pub fn scan_angle_deg(&self) -> Option<f64> {
        if self.region.is_leaky() {
            scan_angle(self.beta, self.f).ok()
        } else {
            None
        }
    }
}

/// `n_points` frequencies from `f_start` to `f_stop` inclusive.
pub fn frequency_grid(f_start: f64, f_stop: f64, n_points: usize) -> Result<Vec<f64>> {
    if !(f_start > 0.0 && f_stop > f_start && f_stop.is_finite()) {
        return Err(invalid(
            "sweep",
            format!("need 0 < f_start < f_stop, got {f_start} .. {f_stop}"),
        ));
    }
    if n_points < 2 {
        return Err(invalid("sweep", format!("need at least 2 points, got {n_points}")));
    }
    let step = (f_stop - f_start) / (n_points - 1) as f64;
    Ok((0..n_points)
        .map(|i| {
            if i == n_points - 1 {
                f_stop
            } else {
                f_start + i as f64 * step
            }
        })
        .collect())
}

pub fn dispersion_at(cell: &CrlhUnitCell, f: f64) -> Result<DispersionPoint> {
    Ok(DispersionPoint::from_bloch(f, &bloch_at(cell, f)?))
}

pub fn dispersion_sweep(
    cell: &CrlhUnitCell,
    f_start: f64,
    f_stop: f64,
    n_points: usize,
) -> Result<Vec<DispersionPoint>> {
    frequency_grid(f_start, f_stop, n_points)?
        .into_par_iter()
        .map(|f| dispersion_at(cell, f))
        .collect()
}

/// Frequency [Hz] where β crosses zero inside `bracket`, by bisection.
pub fn transition_frequency(cell: &CrlhUnitCell, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo) {
        return Err(invalid("bracket", format!("need 0 < f_lo < f_hi, got ({lo}, {hi})")));
    }
    let mut beta_lo = bloch_at(cell, lo)?.beta;
    let beta_hi = bloch_at(cell, hi)?.beta;
    if beta_lo == 0.0 {
        return Ok(lo);
    }
    if beta_hi == 0.0 {
        return Ok(hi);
    }
    if beta_lo.signum() == beta_hi.signum() {
        return Err(CrlhError::Bracketing { f_lo: lo, f_hi: hi });
    }
    while hi - lo > TRANSITION_TOL_HZ {
        let mid = 0.5 * (lo + hi);
        let beta_mid = bloch_at(cell, mid)?.beta;
        if beta_mid == 0.0 {
            return Ok(mid);
        }
        if beta_mid.signum() == beta_lo.signum() {
            lo = mid;
            beta_lo = beta_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Adjacent samples where β turns from negative to non-negative.
pub fn locate_transition(points: &[DispersionPoint]) -> Option<(f64, f64)> {
    points
        .windows(2)
        .find(|w| w[0].beta < 0.0 && w[1].beta >= 0.0)
        .map(|w| (w[0].f, w[1].f))
}

/// Beam angle θ = arcsin(β/k₀) in degrees; negative angles point backward.
pub fn scan_angle(beta: f64, f: f64) -> Result<f64> {
    let k0 = free_space_wavenumber(f);
    if beta.abs() > k0 {
        return Err(CrlhError::SlowWave { beta, k0 });
    }
    Ok((beta / k0).asin().to_degrees())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanSample {
    pub f: f64,
    pub theta_deg: f64,
}

/// Beam angles of the fast-wave samples of a sweep.
pub fn scan_profile_from(points: &[DispersionPoint]) -> Vec<ScanSample> {
    points
        .iter()
        .filter_map(|p| p.scan_angle_deg().map(|theta_deg| ScanSample { f: p.f, theta_deg }))
        .collect()
}

pub fn scan_profile(cell: &CrlhUnitCell, f_start: f64, f_stop: f64, n_points: usize) -> Result<Vec<ScanSample>> {
    Ok(scan_profile_from(&dispersion_sweep(cell, f_start, f_stop, n_points)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::{calibrate_balanced, resonances};

    fn cell() -> CrlhUnitCell {
        calibrate_balanced(0.04335e-12, 9.3e9, 50.0, 3.2e-3).unwrap()
    }

    fn matrix_with_half_trace(t: f64) -> TwoPortAbcd {
        // Symmetric lossless section with A = D = t and AD − BC = 1.
        let b = Complex64::new(0.0, 50.0);
        let c = (Complex64::new(t * t, 0.0) - 1.0) / b;
        TwoPortAbcd {
            a: Complex64::new(t, 0.0),
            b,
            c,
            d: Complex64::new(t, 0.0),
        }
    }

    #[test]
    fn transition_point_half_trace() {
        let g = bloch_gamma(&matrix_with_half_trace(1.0), 1e-3);
        assert_eq!(g.beta, 0.0);
        assert_eq!(g.alpha, 0.0);
    }

    #[test]
    fn band_edge_half_trace() {
        let g = bloch_gamma(&matrix_with_half_trace(-1.0), 1e-3);
        assert!((g.beta * 1e-3 - PI).abs() < 1e-12);
        assert_eq!(g.alpha, 0.0);
    }

    #[test]
    fn stopbands_have_zero_or_pi_phase() {
        let hi = bloch_gamma(&matrix_with_half_trace(1.5), 1e-3);
        assert_eq!(hi.beta, 0.0);
        assert!((hi.alpha * 1e-3 - 1.5f64.acosh()).abs() < 1e-12);
        assert!(hi.in_stopband());
        let lo = bloch_gamma(&matrix_with_half_trace(-1.5), 1e-3);
        assert!((lo.beta * 1e-3 - PI).abs() < 1e-12);
        assert!(lo.alpha > 0.0);
    }

    #[test]
    fn calibrated_cell_has_zero_beta_at_target() {
        let b = bloch_at(&cell(), 9.3e9).unwrap();
        assert!(b.beta.abs() * 3.2e-3 < 1e-9);
        assert!(b.alpha <= 1e-9);
    }

    #[test]
    fn balanced_sweep_is_left_handed_below_and_right_handed_above() {
        let pts = dispersion_sweep(&cell(), 7.5e9, 12e9, 451).unwrap();
        let passband: Vec<_> = pts.iter().filter(|p| p.region != Region::Evanescent).collect();
        assert!(!passband.is_empty());
        for p in &passband {
            if p.f < 9.3e9 - 1.0 {
                assert!(p.beta < 0.0, "beta >= 0 at {}", p.f);
            } else if p.f > 9.3e9 + 1.0 {
                assert!(p.beta > 0.0, "beta <= 0 at {}", p.f);
            }
        }
        let sign_changes = passband
            .windows(2)
            .filter(|w| (w[0].beta < 0.0) != (w[1].beta < 0.0))
            .count();
        assert_eq!(sign_changes, 1);
        let r = resonances(&cell());
        assert!((r.f_se() - 9.3e9).abs() < 1.0);
    }

    #[test]
    fn beta_is_continuous_within_passbands() {
        let c = cell();
        let pts = dispersion_sweep(&c, 7.5e9, 12e9, 451).unwrap();
        for w in pts.windows(2) {
            if w[0].region != Region::Evanescent && w[1].region != Region::Evanescent {
                assert!((w[1].beta - w[0].beta).abs() * c.period < PI, "jump at {}", w[0].f);
            }
            assert!(w[0].beta.abs() * c.period <= PI + 1e-12);
        }
    }

    #[test]
    fn k0_and_classification_invariants() {
        let pts = dispersion_sweep(&cell(), 7.5e9, 12e9, 91).unwrap();
        for p in pts {
            assert!((p.k0 - 2.0 * PI * p.f / C0).abs() <= 1e-12 * p.k0);
            match p.region {
                Region::LeftHandedLeaky => assert!(p.beta < 0.0 && p.beta.abs() < p.k0),
                Region::RightHandedLeaky => assert!(p.beta >= 0.0 && p.beta < p.k0),
                Region::GuidedSlowWave => assert!(p.beta.abs() >= p.k0),
                Region::Evanescent => assert!(p.alpha > 0.0),
            }
        }
    }

    #[test]
    fn transition_of_calibrated_cell() {
        let f = transition_frequency(&cell(), (9.0e9, 9.6e9)).unwrap();
        assert!((f - 9.3e9).abs() <= TRANSITION_TOL_HZ);
    }

    #[test]
    fn bracket_without_sign_change_is_rejected() {
        let err = transition_frequency(&cell(), (9.4e9, 9.6e9)).unwrap_err();
        assert!(matches!(err, CrlhError::Bracketing { .. }));
    }

    #[test]
    fn scan_angle_special_values() {
        let f = 9.3e9;
        let k0 = free_space_wavenumber(f);
        assert_eq!(scan_angle(0.0, f).unwrap(), 0.0);
        assert!((scan_angle(k0, f).unwrap() - 90.0).abs() < 1e-12);
        let back = -k0 * 55f64.to_radians().sin();
        assert!((scan_angle(back, f).unwrap() + 55.0).abs() < 1e-9);
        assert!(matches!(scan_angle(1.01 * k0, f), Err(CrlhError::SlowWave { .. })));
    }

    #[test]
    fn scan_profile_crosses_broadside_once() {
        let prof = scan_profile(&cell(), 7.5e9, 12e9, 451).unwrap();
        assert!(!prof.is_empty());
        for w in prof.windows(2) {
            assert!(w[1].theta_deg > w[0].theta_deg);
        }
        let at_f0 = prof.iter().find(|s| s.f == 9.3e9).unwrap();
        assert!(at_f0.theta_deg.abs() < 1e-6);
        assert!(prof.iter().any(|s| s.f < 9.3e9 && s.theta_deg < 0.0));
    }

    #[test]
    fn grid_validation() {
        assert!(frequency_grid(0.0, 1.0, 3).is_err());
        assert!(frequency_grid(2.0, 1.0, 3).is_err());
        assert!(frequency_grid(1.0, 2.0, 1).is_err());
        let g = frequency_grid(7.5e9, 12e9, 451).unwrap();
        assert_eq!(g[180], 9.3e9);
        assert_eq!(g[320], 10.7e9);
        assert_eq!(*g.last().unwrap(), 12e9);
    }

    #[test]
    fn lossy_cell_decays_forward() {
        let c = cell().with_series_resistance(1.0).unwrap();
        for f in [8.8e9, 9.1e9, 9.5e9, 9.8e9] {
            let b = bloch_at(&c, f).unwrap();
            assert!(b.alpha > 0.0);
            let lossless = bloch_at(&cell(), f).unwrap();
            assert_eq!(b.beta.signum(), lossless.beta.signum(), "at {f}");
        }
    }
}
