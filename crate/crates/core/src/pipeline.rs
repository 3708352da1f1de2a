//! End-to-end runs behind the command-line subcommands.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cell::{cell_for_state, is_balanced, resonances, CrlhUnitCell, DEFAULT_BALANCE_TOL};
use crate::config::RunConfig;
use crate::dispersion::{
    dispersion_sweep, locate_transition, scan_profile_from, transition_frequency, DispersionPoint, ScanSample,
};
use crate::error::{CrlhError, Result};
use crate::geometry::{units, SwitchState};
use crate::idc::{self, c_series_approx, modulus_from_geometry, ApproxReading};
use crate::output::json_num;
use crate::radiation::{pattern_at, theta_grid, RadiationPattern, DEFAULT_THETA_STEP_DEG};

fn in_state(state: SwitchState, e: CrlhError) -> CrlhError {
    CrlhError::State {
        fingers: state.finger_count(),
        source: Box::new(e),
    }
}

/// Extracted IDC model for the configured finger count.
pub fn idc_report(config: &RunConfig) -> Result<Value> {
    let g = config.geometry.idc.with_fingers(config.fingers)?;
    let sub = &config.substrate;
    let m = idc::extract(&g, sub, &config.cell.extract)?;
    let modulus = modulus_from_geometry(&g);
    let approx = |reading| {
        c_series_approx(&g, sub, reading)
            .map(|c| json_num(c / units::PF))
            .unwrap_or(Value::Null)
    };
    Ok(json!({
        "fingers": g.n_fingers,
        "c_series_F": json_num(m.c_series),
        "c_series_pF": json_num(m.c_series / units::PF),
        "c_shunt_F": json_num(m.c_shunt),
        "c_shunt_pF": json_num(m.c_shunt / units::PF),
        "l_series_H": json_num(m.l_series),
        "l_series_nH": json_num(m.l_series / units::NH),
        "r_series_ohm": json_num(m.r_series),
        "z0_ohm": json_num(m.z0),
        "k": json_num(modulus.k),
        "k_prime": json_num(modulus.k_prime),
        "elliptic_ratio": json_num(idc::elliptic_ratio(modulus.k)?),
        "c_series_approx_pF": approx(ApproxReading::LengthInCm),
        "c_series_approx_aspect_ratio_pF": approx(ApproxReading::AspectRatio),
    }))
}

pub fn cell_for_config(config: &RunConfig, state: SwitchState) -> Result<CrlhUnitCell> {
    cell_for_state(
        state,
        &config.substrate,
        &config.geometry,
        &config.targets,
        &config.cell,
    )
    .map_err(|e| in_state(state, e))
}

pub fn cell_json(cell: &CrlhUnitCell) -> Value {
    let r = resonances(cell);
    json!({
        "l_r_nH": json_num(cell.l_r / units::NH),
        "c_r_pF": json_num(cell.c_r / units::PF),
        "l_l_nH": json_num(cell.l_l / units::NH),
        "c_l_pF": json_num(cell.c_l / units::PF),
        "period_m": json_num(cell.period),
        "r_series_ohm": json_num(cell.r_series),
        "omega_se_rad_per_s": json_num(r.omega_se),
        "omega_sh_rad_per_s": json_num(r.omega_sh),
        "f_se_Hz": json_num(r.f_se()),
        "f_sh_Hz": json_num(r.f_sh()),
        "balanced": is_balanced(cell, DEFAULT_BALANCE_TOL),
    })
}

pub fn calibrate_report(config: &RunConfig) -> Result<Value> {
    let state = config.state()?;
    let cell = cell_for_config(config, state)?;
    let mut v = cell_json(&cell);
    v["fingers"] = json!(state.finger_count());
    v["target_Hz"] = json_num(config.targets.get(state).unwrap_or(f64::NAN));
    Ok(v)
}

/// Everything computed for one switch state.
#[derive(Debug, Clone)]
pub struct StateRun {
    pub state: SwitchState,
    pub target_hz: f64,
    pub cell: CrlhUnitCell,
    pub points: Vec<DispersionPoint>,
    pub transition_hz: f64,
    pub scan: Vec<ScanSample>,
    /// Pattern at the transition frequency.
    pub broadside: RadiationPattern,
}

impl StateRun {
    pub fn scan_extremes(&self) -> Option<(f64, f64)> {
        let min = self.scan.iter().map(|s| s.theta_deg).reduce(f64::min)?;
        let max = self.scan.iter().map(|s| s.theta_deg).reduce(f64::max)?;
        Some((min, max))
    }
}

pub fn run_state(config: &RunConfig, state: SwitchState) -> Result<StateRun> {
    let inner = || -> Result<StateRun> {
        let target_hz = config
            .targets
            .get(state)
            .ok_or_else(|| CrlhError::Config("no broadside target".into()))?;
        let cell = cell_for_state(
            state,
            &config.substrate,
            &config.geometry,
            &config.targets,
            &config.cell,
        )?;
        let s = &config.sweep;
        let points = dispersion_sweep(&cell, s.f_start, s.f_stop, s.n_points)?;
        let bracket = locate_transition(&points).ok_or(CrlhError::Bracketing {
            f_lo: s.f_start,
            f_hi: s.f_stop,
        })?;
        let transition_hz = transition_frequency(&cell, bracket)?;
        let scan = scan_profile_from(&points);
        let theta = theta_grid(DEFAULT_THETA_STEP_DEG)?;
        let broadside = pattern_at(&cell, &config.geometry, transition_hz, &theta, config.leakage)?;
        Ok(StateRun {
            state,
            target_hz,
            cell,
            points,
            transition_hz,
            scan,
            broadside,
        })
    };
    inner().map_err(|e| in_state(state, e))
}

/// One run per configured target, ordered by finger count.
pub fn run_sweep(config: &RunConfig) -> Result<Vec<StateRun>> {
    let states: Vec<SwitchState> = config.targets.states().collect();
    states.par_iter().map(|&s| run_state(config, s)).collect()
}

pub fn sweep_summary(runs: &[StateRun]) -> Value {
    let states: Vec<Value> = runs
        .iter()
        .map(|r| {
            let (lo, hi) = r.scan_extremes().unwrap_or((f64::NAN, f64::NAN));
            json!({
                "fingers": r.state.finger_count(),
                "target_Hz": json_num(r.target_hz),
                "transition_Hz": json_num(r.transition_hz),
                "transition_GHz": json_num(r.transition_hz / units::GHZ),
                "scan_min_deg": json_num(lo),
                "scan_max_deg": json_num(hi),
                "leaky_samples": r.scan.len(),
                "broadside_main_beam_deg": json_num(r.broadside.main_beam_deg),
                "broadside_beamwidth_3db_deg": json_num(r.broadside.beamwidth_3db_deg),
                "cell": cell_json(&r.cell),
            })
        })
        .collect();
    json!({ "states": states })
}
