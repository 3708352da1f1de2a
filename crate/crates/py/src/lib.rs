//! Python bindings: `import crlh_lwa`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use crlh_core::cell::{self, StateTargets};
use crlh_core::checks;
use crlh_core::config::{self, RunConfig};
use crlh_core::dispersion::{self, DispersionPoint as CorePoint};
use crlh_core::geometry::{CellGeometry, IdcGeometry, SubstrateSpec, SwitchState};
use crlh_core::idc::{self, ExtractOptions};
use crlh_core::network;
use crlh_core::radiation::{self, Leakage, DEFAULT_THETA_STEP_DEG};

create_exception!(crlh_lwa, CrlhError, PyValueError);

fn err(e: crlh_core::CrlhError) -> PyErr {
    CrlhError::new_err(e.to_string())
}

fn load(profile: &str) -> PyResult<RunConfig> {
    config::load_profile(profile).map_err(err)
}

/// Lumped RLC′ model of one interdigital capacitor, SI units.
#[pyclass(frozen, get_all, skip_from_py_object, module = "crlh_lwa")]
#[derive(Clone)]
struct IdcModel {
    c_series: f64,
    c_shunt: f64,
    l_series: f64,
    r_series: f64,
    z0: f64,
}

#[pymethods]
impl IdcModel {
    fn __repr__(&self) -> String {
        format!(
            "IdcModel(c_series={:e}, c_shunt={:e}, l_series={:e}, r_series={}, z0={})",
            self.c_series, self.c_shunt, self.l_series, self.r_series, self.z0
        )
    }
}

/// Symmetric T unit cell: series L_R, C_L; shunt C_R, L_L.
#[pyclass(frozen, skip_from_py_object, module = "crlh_lwa", name = "CrlhUnitCell")]
#[derive(Clone)]
struct PyCell(cell::CrlhUnitCell);

#[pymethods]
impl PyCell {
    #[new]
    #[pyo3(signature = (l_r, c_r, l_l, c_l, period, r_series = 0.0))]
    fn new(l_r: f64, c_r: f64, l_l: f64, c_l: f64, period: f64, r_series: f64) -> PyResult<Self> {
        cell::CrlhUnitCell::new(l_r, c_r, l_l, c_l, period)
            .and_then(|c| c.with_series_resistance(r_series))
            .map(Self)
            .map_err(err)
    }

    /// Balanced cell with its transition at `f0` and Bloch impedance `z_c`.
    #[staticmethod]
    #[pyo3(signature = (c_l, f0, z_c = cell::DEFAULT_BLOCH_IMPEDANCE, period = 3.2e-3))]
    fn balanced(c_l: f64, f0: f64, z_c: f64, period: f64) -> PyResult<Self> {
        cell::calibrate_balanced(c_l, f0, z_c, period).map(Self).map_err(err)
    }

    /// Calibrated cell of a bundled profile for 2, 3 or 4 active fingers.
    #[staticmethod]
    #[pyo3(signature = (fingers, profile = config::DEFAULT_PROFILE))]
    fn for_fingers(fingers: u32, profile: &str) -> PyResult<Self> {
        let cfg = load(profile)?;
        let state = SwitchState::from_fingers(fingers)
            .ok_or_else(|| CrlhError::new_err(format!("fingers must be 2, 3 or 4, got {fingers}")))?;
        cell::cell_for_state(state, &cfg.substrate, &cfg.geometry, &cfg.targets, &cfg.cell)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn l_r(&self) -> f64 {
        self.0.l_r
    }
    #[getter]
    fn c_r(&self) -> f64 {
        self.0.c_r
    }
    #[getter]
    fn l_l(&self) -> f64 {
        self.0.l_l
    }
    #[getter]
    fn c_l(&self) -> f64 {
        self.0.c_l
    }
    #[getter]
    fn period(&self) -> f64 {
        self.0.period
    }
    #[getter]
    fn r_series(&self) -> f64 {
        self.0.r_series
    }

    /// (f_se, f_sh) in Hz.
    fn resonances(&self) -> (f64, f64) {
        let r = cell::resonances(&self.0);
        (r.f_se(), r.f_sh())
    }

    #[pyo3(signature = (rel_tol = cell::DEFAULT_BALANCE_TOL))]
    fn is_balanced(&self, rel_tol: f64) -> bool {
        cell::is_balanced(&self.0, rel_tol)
    }

    /// ABCD matrix at `f` as nested lists of complex numbers.
    fn abcd(&self, f: f64) -> PyResult<[[Complex64; 2]; 2]> {
        let m = network::unit_cell_abcd(&self.0, f).map_err(err)?;
        Ok([[m.a, m.b], [m.c, m.d]])
    }

    /// Complex propagation constant γ = α + jβ per metre.
    fn gamma(&self, f: f64) -> PyResult<Complex64> {
        dispersion::bloch_at(&self.0, f).map(|b| b.gamma()).map_err(err)
    }

    fn dispersion(&self, f_start: f64, f_stop: f64, points: usize) -> PyResult<Vec<DispersionPoint>> {
        let pts = dispersion::dispersion_sweep(&self.0, f_start, f_stop, points).map_err(err)?;
        Ok(pts
            .iter()
            .map(|p| DispersionPoint::from_core(p, self.0.period))
            .collect())
    }

    /// Bisection for β = 0 inside `[f_lo, f_hi]`.
    fn transition_frequency(&self, f_lo: f64, f_hi: f64) -> PyResult<f64> {
        dispersion::transition_frequency(&self.0, (f_lo, f_hi)).map_err(err)
    }

    /// β = 0 crossing located on a sweep grid, then refined by bisection.
    fn find_transition(&self, f_start: f64, f_stop: f64, points: usize) -> PyResult<f64> {
        let pts = dispersion::dispersion_sweep(&self.0, f_start, f_stop, points).map_err(err)?;
        let bracket = dispersion::locate_transition(&pts)
            .ok_or_else(|| CrlhError::new_err("no left- to right-handed transition in the sweep"))?;
        dispersion::transition_frequency(&self.0, bracket).map_err(err)
    }

    /// (f, θ) pairs over the fast-wave part of the sweep.
    fn scan_profile(&self, f_start: f64, f_stop: f64, points: usize) -> PyResult<Vec<(f64, f64)>> {
        let s = dispersion::scan_profile(&self.0, f_start, f_stop, points).map_err(err)?;
        Ok(s.iter().map(|x| (x.f, x.theta_deg)).collect())
    }

    /// Array-factor pattern of `n_cells` cells; `leakage` sets a minimum α·p per cell.
    #[pyo3(signature = (f, n_cells = 8, theta_step = DEFAULT_THETA_STEP_DEG, leakage = None))]
    fn pattern(&self, f: f64, n_cells: u32, theta_step: f64, leakage: Option<f64>) -> PyResult<RadiationPattern> {
        let theta = radiation::theta_grid(theta_step).map_err(err)?;
        let geom = CellGeometry {
            n_cells,
            period: self.0.period,
            ..CellGeometry::paper_default()
        };
        let leak = leakage.map_or(Leakage::Bloch, Leakage::Injected);
        radiation::pattern_at(&self.0, &geom, f, &theta, leak)
            .map(RadiationPattern::from)
            .map_err(err)
    }

    fn __repr__(&self) -> String {
        let c = &self.0;
        format!(
            "CrlhUnitCell(l_r={:e}, c_r={:e}, l_l={:e}, c_l={:e}, period={:e}, r_series={})",
            c.l_r, c.c_r, c.l_l, c.c_l, c.period, c.r_series
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "crlh_lwa")]
#[derive(Clone)]
struct DispersionPoint {
    f: f64,
    beta: f64,
    alpha: f64,
    k0: f64,
    beta_p_over_pi: f64,
    region: &'static str,
    scan_angle_deg: Option<f64>,
}

impl DispersionPoint {
    fn from_core(p: &CorePoint, period: f64) -> Self {
        Self {
            f: p.f,
            beta: p.beta,
            alpha: p.alpha,
            k0: p.k0,
            beta_p_over_pi: p.beta_p_over_pi(period),
            region: p.region.as_str(),
            scan_angle_deg: p.scan_angle_deg(),
        }
    }
}

#[pymethods]
impl DispersionPoint {
    fn __repr__(&self) -> String {
        format!(
            "DispersionPoint(f={:e}, beta={}, alpha={}, region={})",
            self.f, self.beta, self.alpha, self.region
        )
    }
}

#[pyclass(frozen, get_all, skip_from_py_object, module = "crlh_lwa")]
#[derive(Clone)]
struct RadiationPattern {
    f: f64,
    theta_deg: Vec<f64>,
    magnitude_db: Vec<f64>,
    main_beam_deg: f64,
    beamwidth_3db_deg: f64,
}

impl From<radiation::RadiationPattern> for RadiationPattern {
    fn from(p: radiation::RadiationPattern) -> Self {
        Self {
            f: p.f,
            theta_deg: p.theta_deg,
            magnitude_db: p.magnitude_db,
            main_beam_deg: p.main_beam_deg,
            beamwidth_3db_deg: p.beamwidth_3db_deg,
        }
    }
}

/// K(k)/K′(k) from the piecewise closed form.
#[pyfunction]
fn elliptic_ratio(k: f64) -> PyResult<f64> {
    idc::elliptic_ratio(k).map_err(err)
}

/// Lumped model of an IDC; lengths in metres.
#[pyfunction]
#[pyo3(signature = (
    n_fingers, finger_length = 0.86e-3, finger_width = 0.4e-3, gap = 0.4e-3,
    epsilon_r = 3.8, h = 1.5748e-3, base_width = None, sheet_resistivity = 0.0, z0 = None,
))]
#[allow(clippy::too_many_arguments)]
fn extract_idc(
    n_fingers: u32,
    finger_length: f64,
    finger_width: f64,
    gap: f64,
    epsilon_r: f64,
    h: f64,
    base_width: Option<f64>,
    sheet_resistivity: f64,
    z0: Option<f64>,
) -> PyResult<IdcModel> {
    let g = IdcGeometry::new(
        n_fingers,
        finger_length,
        finger_width,
        gap,
        base_width.unwrap_or(finger_width),
    )
    .map_err(err)?;
    let sub = SubstrateSpec::new(epsilon_r, h).map_err(err)?;
    let m = idc::extract(&g, &sub, &ExtractOptions { sheet_resistivity, z0 }).map_err(err)?;
    Ok(IdcModel {
        c_series: m.c_series,
        c_shunt: m.c_shunt,
        l_series: m.l_series,
        r_series: m.r_series,
        z0: m.z0,
    })
}

/// Beam angle [deg] for phase constant `beta` at `f`.
#[pyfunction]
fn scan_angle(beta: f64, f: f64) -> PyResult<f64> {
    dispersion::scan_angle(beta, f).map_err(err)
}

/// Broadside targets of a bundled profile as {fingers: Hz}.
#[pyfunction]
#[pyo3(signature = (profile = config::DEFAULT_PROFILE))]
fn broadside_targets(profile: &str) -> PyResult<Vec<(u32, f64)>> {
    let targets: StateTargets = load(profile)?.targets;
    Ok(targets
        .states()
        .filter_map(|s| targets.get(s).map(|f| (s.finger_count(), f)))
        .collect())
}

/// Self-checks of a bundled profile as a list of dicts.
#[pyfunction]
#[pyo3(signature = (profile = config::DEFAULT_PROFILE))]
fn run_checks<'py>(py: Python<'py>, profile: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = load(profile)?;
    checks::run_checks(&cfg)
        .into_iter()
        .map(|c| {
            let d = PyDict::new(py);
            d.set_item("id", c.id)?;
            d.set_item("name", c.name)?;
            d.set_item("passed", c.passed)?;
            d.set_item("detail", c.detail)?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn crlh_lwa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CrlhError", m.py().get_type::<CrlhError>())?;
    m.add_class::<PyCell>()?;
    m.add_class::<IdcModel>()?;
    m.add_class::<DispersionPoint>()?;
    m.add_class::<RadiationPattern>()?;
    m.add_function(wrap_pyfunction!(elliptic_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(extract_idc, m)?)?;
    m.add_function(wrap_pyfunction!(scan_angle, m)?)?;
    m.add_function(wrap_pyfunction!(broadside_targets, m)?)?;
    m.add_function(wrap_pyfunction!(run_checks, m)?)?;
    Ok(())
}
