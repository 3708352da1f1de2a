//! Self-checks run by `reproduce`: the reference anchor, elliptic-branch
//! fidelity, and the band-structure properties of every calibrated state.

use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::dispersion::{bloch_at, dispersion_sweep, scan_angle, Region};
use crate::error::Result;
use crate::geometry::{units, SwitchState};
use crate::idc::{c_series_gap, elliptic, exact_elliptic_ratio};
use crate::network::unit_cell_abcd;
use crate::pipeline::{run_state, StateRun};
use crate::radiation::{pattern_at, theta_grid, DEFAULT_THETA_STEP_DEG};

pub const ANCHOR_PF: f64 = 0.0867;
pub const ANCHOR_TOL: f64 = 0.01;
pub const ELLIPTIC_TOL: f64 = 0.01;
pub const TRANSITION_TOL: f64 = 1e-3;
pub const ALPHA_AT_F0_MAX: f64 = 1e-9;
pub const PERTURBED_C_R: f64 = 1.2;
pub const SCAN_SPAN_DEG: f64 = 45.0;
pub const TRACE_TOL: f64 = 1e-8;
pub const TRACE_CELLS: u32 = 8;
pub const TRACE_SAMPLES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(id: u8, name: &'static str, outcome: Result<(bool, String)>) -> CheckResult {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, e.to_string()));
    CheckResult {
        id,
        name,
        passed,
        detail,
    }
}

pub fn idc_anchor(config: &RunConfig) -> Result<(bool, String)> {
    let g = config.geometry.idc.with_fingers(4)?;
    let c = c_series_gap(&g, &config.substrate)? / units::PF;
    let err = (c - ANCHOR_PF).abs() / ANCHOR_PF;
    Ok((
        err <= ANCHOR_TOL,
        format!("C_series = {c:.5} pF, deviation {:.3}%", 100.0 * err),
    ))
}

pub fn elliptic_fidelity() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let k = 0.05 + 0.9 * i as f64 / 49.0;
        let closed = elliptic::elliptic_ratio(k)?;
        let exact = exact_elliptic_ratio(k)?;
        worst = worst.max((closed / exact - 1.0).abs());
    }
    let k = elliptic::BRANCH_POINT;
    let branch_gap = (elliptic::upper_branch(k) / elliptic::lower_branch(k) - 1.0).abs();
    Ok((
        worst <= ELLIPTIC_TOL && branch_gap <= ELLIPTIC_TOL,
        format!("max rel. error {worst:.2e} over 50 samples, branch gap {branch_gap:.2e}"),
    ))
}

fn per_state<F>(runs: &[(SwitchState, Result<StateRun>)], f: F) -> Result<(bool, String)>
where
    F: Fn(&StateRun) -> Result<(bool, String)>,
{
    let mut ok = true;
    let mut details = Vec::new();
    for (state, run) in runs {
        let (pass, detail) = match run {
            Ok(run) => f(run).unwrap_or_else(|e| (false, e.to_string())),
            Err(e) => (false, e.to_string()),
        };
        ok &= pass;
        details.push(format!("N={}: {detail}", state.finger_count()));
    }
    Ok((ok, details.join("; ")))
}

pub fn broadside_tuning(run: &StateRun) -> Result<(bool, String)> {
    let err = (run.transition_hz - run.target_hz).abs() / run.target_hz;
    Ok((
        err <= TRANSITION_TOL,
        format!("{:.4} GHz ({:.1e} rel.)", run.transition_hz / units::GHZ, err),
    ))
}

/// Index range from the first left-handed leaky sample to the last right-handed one.
fn leaky_span(points: &[crate::dispersion::DispersionPoint]) -> Option<(usize, usize)> {
    let first = points.iter().position(|p| p.region == Region::LeftHandedLeaky)?;
    let last = points.iter().rposition(|p| p.region == Region::RightHandedLeaky)?;
    (first < last).then_some((first, last))
}

pub fn gapless(run: &StateRun, config: &RunConfig) -> Result<(bool, String)> {
    let Some((first, last)) = leaky_span(&run.points) else {
        return Ok((false, "no LH and RH leaky bands in sweep".into()));
    };
    let gaps = run.points[first..=last]
        .iter()
        .filter(|p| p.region == Region::Evanescent)
        .count();
    let alpha = bloch_at(&run.cell, run.target_hz)?.alpha;

    let mut perturbed = run.cell;
    perturbed.c_r *= PERTURBED_C_R;
    let s = &config.sweep;
    let pts = dispersion_sweep(&perturbed, s.f_start, s.f_stop, s.n_points)?;
    let r = crate::cell::resonances(&perturbed);
    let (lo, hi) = (r.f_sh().min(r.f_se()), r.f_sh().max(r.f_se()));
    let opened = pts
        .iter()
        .filter(|p| p.f >= lo && p.f <= hi && p.region == Region::Evanescent)
        .count();
    Ok((
        gaps == 0 && alpha <= ALPHA_AT_F0_MAX && opened > 0,
        format!("{gaps} evanescent samples between bands, alpha(f0) = {alpha:.1e} Np/m, perturbed stop band {opened} samples"),
    ))
}

pub fn scan_consistency(run: &StateRun, config: &RunConfig) -> Result<(bool, String)> {
    let theta = theta_grid(DEFAULT_THETA_STEP_DEG)?;
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut n = 0;
    for p in run.points.iter().filter(|p| p.region.is_leaky()) {
        let pattern = pattern_at(&run.cell, &config.geometry, p.f, &theta, config.leakage)?;
        let expected = scan_angle(p.beta, p.f)?;
        let miss = (pattern.main_beam_deg - expected).abs();
        ok &= miss <= pattern.beamwidth_3db_deg / 2.0;
        worst = worst.max(miss / (pattern.beamwidth_3db_deg / 2.0));
        n += 1;
    }
    Ok((
        ok && n > 0,
        format!("{n} leaky samples, worst miss {worst:.3} half-beamwidths"),
    ))
}

pub fn full_space(run: &StateRun) -> Result<(bool, String)> {
    let Some((lo, hi)) = run.scan_extremes() else {
        return Ok((false, "no leaky samples".into()));
    };
    let crossings: Vec<(f64, f64)> = run
        .scan
        .windows(2)
        .filter(|w| (w[0].theta_deg < 0.0) != (w[1].theta_deg < 0.0))
        .map(|w| (w[0].f, w[1].f))
        .collect();
    let at_f0 = crossings.len() == 1 && crossings[0].0 <= run.target_hz && run.target_hz <= crossings[0].1;
    Ok((
        lo <= -SCAN_SPAN_DEG && hi >= SCAN_SPAN_DEG && at_f0,
        format!("{lo:.1} deg .. {hi:.1} deg, {} broadside crossing(s)", crossings.len()),
    ))
}

/// Golden-ratio sequence in [0, 1): deterministic, well spread.
fn spread(i: usize) -> f64 {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    ((i + 1) as f64 * phi).fract()
}

pub fn trace_identity(run: &StateRun, config: &RunConfig) -> Result<(bool, String)> {
    let s = &config.sweep;
    let mut worst: f64 = 0.0;
    for i in 0..TRACE_SAMPLES {
        let f = s.f_start + spread(i) * (s.f_stop - s.f_start);
        let m = unit_cell_abcd(&run.cell, f)?;
        let gamma = bloch_at(&run.cell, f)?.gamma();
        let expected = 2.0 * (Complex64::new(f64::from(TRACE_CELLS), 0.0) * gamma * run.cell.period).cosh();
        let trace = m.pow(TRACE_CELLS).trace();
        worst = worst.max((trace - expected).norm() / expected.norm());
    }
    Ok((worst <= TRACE_TOL, format!("max rel. error {worst:.2e}")))
}

pub fn antiparallel(run: &StateRun) -> Result<(bool, String)> {
    let mut checked = 0;
    let mut violations = 0;
    for w in run.points.windows(2) {
        let passband = w.iter().all(|p| p.region != Region::Evanescent);
        if passband && w[0].beta < 0.0 && w[1].beta < 0.0 {
            checked += 1;
            if (w[1].beta - w[0].beta) / (w[1].f - w[0].f) <= 0.0 {
                violations += 1;
            }
        }
    }
    Ok((
        violations == 0 && checked > 0,
        format!("{checked} LH intervals, {violations} with dbeta/df <= 0"),
    ))
}

/// All checks for `config`, in acceptance order.
pub fn run_checks(config: &RunConfig) -> Vec<CheckResult> {
    let runs: Vec<(SwitchState, Result<StateRun>)> =
        config.targets.states().map(|s| (s, run_state(config, s))).collect();
    vec![
        check(1, "IDC anchor", idc_anchor(config)),
        check(2, "Elliptic branch fidelity", elliptic_fidelity()),
        check(3, "Broadside tuning", per_state(&runs, broadside_tuning)),
        check(
            4,
            "Gapless balanced dispersion",
            per_state(&runs, |r| gapless(r, config)),
        ),
        check(
            5,
            "Scan-angle consistency",
            per_state(&runs, |r| scan_consistency(r, config)),
        ),
        check(6, "Full-space attainability", per_state(&runs, full_space)),
        check(
            7,
            "Bloch oracle equivalence",
            per_state(&runs, |r| trace_identity(r, config)),
        ),
        check(8, "Antiparallel velocities", per_state(&runs, antiparallel)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn reference_configuration_passes_every_check() {
        let results = run_checks(&RunConfig::default());
        assert_eq!(results.len(), 8);
        for r in &results {
            assert!(r.passed, "{}: {}", r.name, r.detail);
        }
    }

    #[test]
    fn vacuum_substrate_fails_the_anchor() {
        let c = parse_config("epsilon_r = 1.0").unwrap();
        let results = run_checks(&c);
        assert!(!results[0].passed);
    }
}
