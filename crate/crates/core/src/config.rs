//! Flat `key = value` run configuration and bundled profiles.
//!
//! Lengths are given in millimetres and frequencies in GHz; both are
//! converted to SI on parse. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::cell::{CellOptions, SeriesCombination, StateTargets};
use crate::error::{CrlhError, Result};
use crate::geometry::{units, CellGeometry, IdcGeometry, PatchDimensions, SubstrateSpec, SwitchState};
use crate::idc::ExtractOptions;
use crate::radiation::Leakage;

pub const DEFAULT_PROFILE: &str = "paper-default";

const PAPER_DEFAULT: &str = include_str!("../profiles/paper-default.conf");

/// Names of the bundled profiles.
pub const PROFILES: &[&str] = &[DEFAULT_PROFILE];

pub fn bundled_profile(name: &str) -> Option<&'static str> {
    match name {
        DEFAULT_PROFILE => Some(PAPER_DEFAULT),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub f_start: f64,
    pub f_stop: f64,
    pub n_points: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.f_start > 0.0 && self.f_start < self.f_stop) {
            return Err(CrlhError::Config(format!(
                "sweep needs 0 < f_start < f_stop, got {} .. {} Hz",
                self.f_start, self.f_stop
            )));
        }
        if self.n_points < 2 {
            return Err(CrlhError::Config(format!(
                "sweep needs at least 2 points, got {}",
                self.n_points
            )));
        }
        Ok(())
    }
}

impl Default for SweepSpec {
    /// 7.5 to 12 GHz in 10 MHz steps.
    fn default() -> Self {
        Self {
            f_start: 7.5 * units::GHZ,
            f_stop: 12.0 * units::GHZ,
            n_points: 451,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = CrlhError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(CrlhError::Config(format!("format must be csv or json, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub substrate: SubstrateSpec,
    pub geometry: CellGeometry,
    /// Finger count for single-state commands.
    pub fingers: u32,
    pub targets: StateTargets,
    pub sweep: SweepSpec,
    pub cell: CellOptions,
    pub leakage: Leakage,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config(PAPER_DEFAULT).expect("bundled profile parses")
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        if self.fingers < 1 {
            return Err(CrlhError::Config("fingers must be >= 1".into()));
        }
        Ok(())
    }

    /// Switch state selected by `fingers`.
    pub fn state(&self) -> Result<SwitchState> {
        SwitchState::from_fingers(self.fingers).ok_or_else(|| {
            CrlhError::Config(format!(
                "fingers = {} has no switch state; choose 2, 3 or 4",
                self.fingers
            ))
        })
    }

    pub fn with_fingers(mut self, fingers: u32) -> Result<Self> {
        self.fingers = fingers;
        self.geometry = self.geometry.with_fingers(fingers)?;
        Ok(self)
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| CrlhError::Config(format!("`{key}`: expected a number, got `{value}`")))
}

fn parse_u32(key: &str, value: &str) -> Result<u32> {
    value
        .parse::<u32>()
        .map_err(|_| CrlhError::Config(format!("`{key}`: expected a non-negative integer, got `{value}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(CrlhError::Config(format!("`{key}`: expected a boolean, got `{value}`"))),
    }
}

/// `2:10.7, 3:9.5` → {AllOff: 10.7 GHz, UpperOff: 9.5 GHz}.
fn parse_targets(value: &str) -> Result<StateTargets> {
    let mut map = BTreeMap::new();
    for entry in value.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (n, f) = entry
            .split_once(':')
            .ok_or_else(|| CrlhError::Config(format!("`targets_ghz`: expected `fingers:GHz`, got `{entry}`")))?;
        let n = parse_u32("targets_ghz", n.trim())?;
        let state = SwitchState::from_fingers(n)
            .ok_or_else(|| CrlhError::Config(format!("`targets_ghz`: finger count {n} is not one of 2, 3, 4")))?;
        let f = parse_f64("targets_ghz", f.trim())?;
        if !(f > 0.0) {
            return Err(CrlhError::Config(format!(
                "`targets_ghz`: frequency must be > 0, got {f}"
            )));
        }
        if map.insert(state, f * units::GHZ).is_some() {
            return Err(CrlhError::Config(format!("`targets_ghz`: {n} fingers listed twice")));
        }
    }
    if map.is_empty() {
        return Err(CrlhError::Config("`targets_ghz` is empty".into()));
    }
    Ok(StateTargets(map))
}

/// Parses a configuration; keys that are absent keep their reference values.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CrlhError::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1)))?;
        let key = key.trim().to_string();
        if entries
            .insert(key.clone(), (lineno + 1, value.trim().to_string()))
            .is_some()
        {
            return Err(CrlhError::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }

    let mut epsilon_r = 3.8;
    let mut h = units::mm(1.5748);
    let mut period = units::mm(3.2);
    let mut finger_length = units::mm(0.86);
    let mut finger_width = units::mm(0.4);
    let mut gap = units::mm(0.4);
    let mut base_width = None;
    let mut cell_gap = units::mm(0.1);
    let mut n_cells = 8;
    let mut fingers = 4;
    let mut targets = StateTargets::paper_default();
    let mut sweep = SweepSpec::default();
    let mut cell = CellOptions::default();
    let mut extract = ExtractOptions::default();
    let mut leakage = Leakage::Bloch;
    let mut patch = PatchDimensions::default();

    for (key, (lineno, value)) in &entries {
        let k = key.as_str();
        let v = value.as_str();
        match k {
            "epsilon_r" => epsilon_r = parse_f64(k, v)?,
            "h_mm" => h = units::mm(parse_f64(k, v)?),
            "period_mm" => period = units::mm(parse_f64(k, v)?),
            "finger_length_mm" => finger_length = units::mm(parse_f64(k, v)?),
            "finger_width_mm" => finger_width = units::mm(parse_f64(k, v)?),
            "gap_mm" => gap = units::mm(parse_f64(k, v)?),
            "base_width_mm" => base_width = Some(units::mm(parse_f64(k, v)?)),
            "cell_gap_mm" => cell_gap = units::mm(parse_f64(k, v)?),
            "n_cells" => n_cells = parse_u32(k, v)?,
            "fingers" => fingers = parse_u32(k, v)?,
            "targets_ghz" => targets = parse_targets(v)?,
            "freq_start_ghz" => sweep.f_start = parse_f64(k, v)? * units::GHZ,
            "freq_stop_ghz" => sweep.f_stop = parse_f64(k, v)? * units::GHZ,
            "points" => sweep.n_points = parse_u32(k, v)? as usize,
            "sheet_resistance_ohm_sq" => extract.sheet_resistivity = parse_f64(k, v)?,
            "z0_ohm" => extract.z0 = Some(parse_f64(k, v)?),
            "bloch_impedance_ohm" => cell.z_c = Some(parse_f64(k, v)?),
            "series_combination" => cell.combination = v.parse::<SeriesCombination>()?,
            "include_parasitics" => cell.include_parasitics = parse_bool(k, v)?,
            "leakage_np_per_cell" => {
                let np = parse_f64(k, v)?;
                leakage = if np > 0.0 {
                    Leakage::Injected(np)
                } else {
                    Leakage::Bloch
                };
            }
            "patch_l1_mm" => patch.l1 = units::mm(parse_f64(k, v)?),
            "patch_l2_mm" => patch.l2 = units::mm(parse_f64(k, v)?),
            "patch_l3_mm" => patch.l3 = units::mm(parse_f64(k, v)?),
            "patch_l4_mm" => patch.l4 = units::mm(parse_f64(k, v)?),
            "patch_s1_mm" => patch.s1 = units::mm(parse_f64(k, v)?),
            "patch_s2_mm" => patch.s2 = units::mm(parse_f64(k, v)?),
            "patch_s3_mm" => patch.s3 = units::mm(parse_f64(k, v)?),
            "patch_s4_mm" => patch.s4 = units::mm(parse_f64(k, v)?),
            _ => {
                return Err(CrlhError::Config(format!("line {lineno}: unknown key `{key}`")));
            }
        }
    }
    cell.extract = extract;

    let substrate = SubstrateSpec::new(epsilon_r, h)?;
    let idc = IdcGeometry::new(
        fingers,
        finger_length,
        finger_width,
        gap,
        base_width.unwrap_or(finger_width),
    )?;
    let mut geometry = CellGeometry::new(period, idc, cell_gap, n_cells)?;
    geometry.patch = patch;

    let config = RunConfig {
        substrate,
        geometry,
        fingers,
        targets,
        sweep,
        cell,
        leakage,
        format: OutputFormat::Csv,
        out: None,
    };
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CrlhError::Config(format!("config not found: {}", path.display()))
        } else {
            CrlhError::Config(format!("cannot read {}: {e}", path.display()))
        }
    })?;
    parse_config(&text)
}

pub fn load_profile(name: &str) -> Result<RunConfig> {
    let text = bundled_profile(name)
        .ok_or_else(|| CrlhError::Config(format!("unknown profile `{name}`; available: {}", PROFILES.join(", "))))?;
    parse_config(text)
}
