//! CRLH unit-cell equivalent circuit and its balanced calibration.
//!
//! Only the left-handed series capacitance comes from the layout (the IDC
//! extraction). The remaining three elements are closed by requiring
//! ω_se = ω_sh = 2πf₀ and a Bloch impedance z_c at the transition.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, CrlhError, Result};
use crate::geometry::{units, CellGeometry, SubstrateSpec, SwitchState};
use crate::idc::{self, ExtractOptions};

pub const DEFAULT_BALANCE_TOL: f64 = 1e-3;
pub const DEFAULT_BLOCH_IMPEDANCE: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrlhUnitCell {
    /// Right-handed series inductance L_R [H].
    pub l_r: f64,
    /// Right-handed shunt capacitance C_R [F].
    pub c_r: f64,
    /// Left-handed shunt inductance L_L [H].
    pub l_l: f64,
    /// Left-handed series capacitance C_L [F].
    pub c_l: f64,
    /// Period p [m].
    pub period: f64,
    /// Series loss resistance [Ω]; zero for the ideal circuit.
    pub r_series: f64,
}

impl CrlhUnitCell {
    pub fn new(l_r: f64, c_r: f64, l_l: f64, c_l: f64, period: f64) -> Result<Self> {
        let cell = Self {
            l_r,
            c_r,
            l_l,
            c_l,
            period,
            r_series: 0.0,
        };
        cell.validate()?;
        Ok(cell)
    }

    pub fn with_series_resistance(self, r: f64) -> Result<Self> {
        if !(r >= 0.0) {
            return Err(invalid("unit cell", format!("series resistance must be >= 0, got {r}")));
        }
        Ok(Self { r_series: r, ..self })
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("L_R", self.l_r),
            ("C_R", self.c_r),
            ("L_L", self.l_l),
            ("C_L", self.c_l),
            ("period", self.period),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid("unit cell", format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonancePair {
    /// Series resonance [rad/s].
    pub omega_se: f64,
    /// Shunt resonance [rad/s].
    pub omega_sh: f64,
}

impl ResonancePair {
    pub fn f_se(&self) -> f64 {
        self.omega_se / (2.0 * PI)
    }

    pub fn f_sh(&self) -> f64 {
        self.omega_sh / (2.0 * PI)
    }
}

pub fn resonances(cell: &CrlhUnitCell) -> ResonancePair {
    ResonancePair {
        omega_se: 1.0 / (cell.l_r * cell.c_l).sqrt(),
        omega_sh: 1.0 / (cell.l_l * cell.c_r).sqrt(),
    }
}

pub fn is_balanced(cell: &CrlhUnitCell, rel_tol: f64) -> bool {
    let r = resonances(cell);
    (r.omega_se - r.omega_sh).abs() <= rel_tol * r.omega_se
}

/// Balanced cell with series resonance at `f_broadside` and Bloch impedance `z_c`.
pub fn calibrate_balanced(c_l: f64, f_broadside: f64, z_c: f64, period: f64) -> Result<CrlhUnitCell> {
    for (name, v) in [
        ("C_L", c_l),
        ("broadside frequency", f_broadside),
        ("z_c", z_c),
        ("period", period),
    ] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid("calibration input", format!("{name} must be > 0, got {v}")));
        }
    }
    let omega0 = 2.0 * PI * f_broadside;
    let l_r = 1.0 / (omega0 * omega0 * c_l);
    let c_r = l_r / (z_c * z_c);
    let l_l = z_c * z_c * c_l;
    CrlhUnitCell::new(l_r, c_r, l_l, c_l, period)
}

/// How the IDC series capacitance enters the cell's C_L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SeriesCombination {
    /// Two IDCs in the through path of each period: C_L = C_series / 2.
    #[default]
    Half,
    /// One IDC per period: C_L = C_series.
    Full,
}

impl SeriesCombination {
    pub fn idcs_per_cell(self) -> u32 {
        match self {
            SeriesCombination::Half => 2,
            SeriesCombination::Full => 1,
        }
    }

    pub fn c_l(self, c_series: f64) -> f64 {
        c_series / f64::from(self.idcs_per_cell())
    }
}

impl std::str::FromStr for SeriesCombination {
    type Err = CrlhError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(Self::Half),
            "full" => Ok(Self::Full),
            other => Err(CrlhError::Config(format!(
                "series combination must be `half` or `full`, got `{other}`"
            ))),
        }
    }
}

/// Broadside frequency [Hz] per switch state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateTargets(pub BTreeMap<SwitchState, f64>);

impl StateTargets {
    /// 10.7, 9.5 and 9.3 GHz for 2, 3 and 4 fingers.
    pub fn paper_default() -> Self {
        Self(BTreeMap::from([
            (SwitchState::AllOff, 10.7 * units::GHZ),
            (SwitchState::UpperOff, 9.5 * units::GHZ),
            (SwitchState::AllOn, 9.3 * units::GHZ),
        ]))
    }

    pub fn get(&self, state: SwitchState) -> Option<f64> {
        self.0.get(&state).copied()
    }

    pub fn states(&self) -> impl Iterator<Item = SwitchState> + '_ {
        self.0.keys().copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CellOptions {
    pub combination: SeriesCombination,
    /// Bloch impedance at the transition; `None` selects 50 Ω.
    pub z_c: Option<f64>,
    /// Add IDC resistance to the series branch and C′ to C_R after calibration.
    pub include_parasitics: bool,
    pub extract: ExtractOptions,
}

impl CellOptions {
    pub fn bloch_impedance(&self) -> f64 {
        self.z_c.unwrap_or(DEFAULT_BLOCH_IMPEDANCE)
    }
}

/// Calibrated unit cell for one switch state.
pub fn cell_for_state(
    state: SwitchState,
    sub: &SubstrateSpec,
    geom: &CellGeometry,
    targets: &StateTargets,
    opts: &CellOptions,
) -> Result<CrlhUnitCell> {
    let f0 = targets
        .get(state)
        .ok_or_else(|| CrlhError::Config(format!("no broadside target for {} fingers", state.finger_count())))?;
    let idc_geom = geom.idc.with_fingers(state.finger_count())?;
    let model = idc::extract(&idc_geom, sub, &opts.extract)?;
    let c_l = opts.combination.c_l(model.c_series);
    let cell = calibrate_balanced(c_l, f0, opts.bloch_impedance(), geom.period)?;
    if !opts.include_parasitics {
        return Ok(cell);
    }
    let n_idc = f64::from(opts.combination.idcs_per_cell());
    let cell = CrlhUnitCell {
        c_r: cell.c_r + n_idc * 2.0 * model.c_shunt,
        ..cell
    };
    cell.with_series_resistance(n_idc * model.r_series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn four_finger_cell() -> CrlhUnitCell {
        calibrate_balanced(0.04335e-12, 9.3e9, 50.0, 3.2e-3).unwrap()
    }

    #[test]
    fn calibration_reproduces_hand_values() {
        let c = four_finger_cell();
        let w0 = 2.0 * PI * 9.3e9;
        assert_relative_eq!(
            c.l_r,
            1.0 / (w0 * w0 * 0.04335e-12),
            epsilon = 0.0,
            max_relative = 1e-14
        );
        assert!((c.l_r / units::NH - 6.76).abs() < 0.01, "L_R = {}", c.l_r);
        assert!((c.c_r / units::PF - 2.70).abs() < 0.01, "C_R = {}", c.c_r);
        assert!((c.l_l / units::NH - 0.108).abs() < 0.001, "L_L = {}", c.l_l);
    }

    #[test]
    fn series_resonance_of_four_finger_cell() {
        let r = resonances(&four_finger_cell());
        assert!((r.f_se() / 1e9 - 9.3).abs() < 1e-9 * 9.3);
        let manual = CrlhUnitCell::new(6.76e-9, 2.7e-12, 0.108e-9, 0.04335e-12, 3.2e-3).unwrap();
        assert!((resonances(&manual).f_se() / 1e9 - 9.3).abs() < 0.01);
    }

    #[test]
    fn equal_products_are_balanced() {
        let c = CrlhUnitCell::new(2e-9, 4e-12, 0.5e-9, 1e-12, 1e-3).unwrap();
        let r = resonances(&c);
        assert_relative_eq!(r.omega_se, r.omega_sh, epsilon = 0.0, max_relative = 1e-15);
        assert!(is_balanced(&c, DEFAULT_BALANCE_TOL));
    }

    #[test]
    fn doubled_shunt_capacitance_breaks_balance() {
        let mut c = four_finger_cell();
        assert!(is_balanced(&c, 1e-3));
        c.c_r *= 2.0;
        assert!(!is_balanced(&c, 1e-3));
        let r = resonances(&c);
        assert_relative_eq!(
            r.omega_sh / r.omega_se,
            1.0 / 2f64.sqrt(),
            epsilon = 0.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn scaling_elements_scales_resonances_inversely() {
        let c = four_finger_cell();
        let s = 3.0;
        let scaled = CrlhUnitCell::new(c.l_r * s, c.c_r * s, c.l_l * s, c.c_l * s, c.period).unwrap();
        let (a, b) = (resonances(&c), resonances(&scaled));
        assert_relative_eq!(b.omega_se, a.omega_se / s, epsilon = 0.0, max_relative = 1e-14);
        assert_relative_eq!(b.omega_sh, a.omega_sh / s, epsilon = 0.0, max_relative = 1e-14);
    }

    #[test]
    fn rejects_nonpositive_inputs() {
        assert!(calibrate_balanced(0.0, 9.3e9, 50.0, 3.2e-3).is_err());
        assert!(calibrate_balanced(1e-13, -1.0, 50.0, 3.2e-3).is_err());
        assert!(CrlhUnitCell::new(1e-9, 1e-12, 0.0, 1e-12, 1e-3).is_err());
    }

    #[test]
    fn reference_states_calibrate_to_their_targets() {
        let sub = SubstrateSpec::paper_default();
        let geom = CellGeometry::paper_default();
        let targets = StateTargets::paper_default();
        let mut prev_c_l = 0.0;
        let mut prev_f0 = f64::INFINITY;
        for state in SwitchState::ALL {
            let cell = cell_for_state(state, &sub, &geom, &targets, &CellOptions::default()).unwrap();
            let f0 = targets.get(state).unwrap();
            assert!(is_balanced(&cell, DEFAULT_BALANCE_TOL));
            assert_relative_eq!(resonances(&cell).f_se(), f0, epsilon = 0.0, max_relative = 1e-9);
            assert!(cell.c_l > prev_c_l);
            assert!(f0 < prev_f0);
            prev_c_l = cell.c_l;
            prev_f0 = f0;
        }
    }

    #[test]
    fn half_combination_halves_the_gap_capacitance() {
        let sub = SubstrateSpec::paper_default();
        let geom = CellGeometry::paper_default();
        let targets = StateTargets::paper_default();
        let half = cell_for_state(SwitchState::AllOn, &sub, &geom, &targets, &CellOptions::default()).unwrap();
        let full_opts = CellOptions {
            combination: SeriesCombination::Full,
            ..Default::default()
        };
        let full = cell_for_state(SwitchState::AllOn, &sub, &geom, &targets, &full_opts).unwrap();
        assert_relative_eq!(full.c_l, 2.0 * half.c_l, epsilon = 0.0, max_relative = 1e-15);
        assert!((half.c_l / units::PF - 0.04335).abs() < 0.0005);
    }

    #[test]
    fn missing_target_is_a_configuration_error() {
        let targets = StateTargets(BTreeMap::from([(SwitchState::AllOn, 9.3e9)]));
        let err = cell_for_state(
            SwitchState::AllOff,
            &SubstrateSpec::paper_default(),
            &CellGeometry::paper_default(),
            &targets,
            &CellOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, CrlhError::Config(_)));
    }

    #[test]
    fn parasitics_shift_the_shunt_branch() {
        let sub = SubstrateSpec::paper_default();
        let geom = CellGeometry::paper_default();
        let targets = StateTargets::paper_default();
        let ideal = cell_for_state(SwitchState::AllOn, &sub, &geom, &targets, &CellOptions::default()).unwrap();
        let opts = CellOptions {
            include_parasitics: true,
            extract: ExtractOptions {
                sheet_resistivity: 0.01,
                z0: None,
            },
            ..Default::default()
        };
        let lossy = cell_for_state(SwitchState::AllOn, &sub, &geom, &targets, &opts).unwrap();
        assert!(lossy.c_r > ideal.c_r);
        assert!(lossy.r_series > 0.0);
        assert_eq!(lossy.l_r, ideal.l_r);
    }

    proptest! {
        #[test]
        fn calibration_is_exact(
            c_l in 1e-15f64..1e-11,
            f0 in 1e8f64..1e11,
            z_c in 1.0f64..500.0,
        ) {
            let cell = calibrate_balanced(c_l, f0, z_c, 1e-3).unwrap();
            let r = resonances(&cell);
            let w0 = 2.0 * PI * f0;
            prop_assert!(((r.omega_se - w0) / w0).abs() <= 1e-9);
            prop_assert!(((r.omega_sh - w0) / w0).abs() <= 1e-9);
            prop_assert!(((cell.l_r / cell.c_r).sqrt() / z_c - 1.0).abs() <= 1e-9);
            prop_assert!(((cell.l_l / cell.c_l).sqrt() / z_c - 1.0).abs() <= 1e-9);
        }
    }
}
