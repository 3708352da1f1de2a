//! Physical constants and geometric descriptions of the antenna board.
//!
//! Everything is stored in SI units. Formulas that are stated in centimetres
//! or micrometres convert at their own boundary through [`units`].

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Free-space constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum [m/s].
    pub c0: f64,
    /// Impedance of free space [Ω].
    pub eta0: f64,
}

pub const PHYSICAL: PhysicalConstants = PhysicalConstants {
    c0: 299_792_458.0,
    eta0: 376.730_313_668,
};

/// Speed of light in vacuum [m/s].
pub const C0: f64 = PHYSICAL.c0;

pub mod units {
    pub const MM: f64 = 1e-3;
    pub const CM: f64 = 1e-2;
    pub const UM: f64 = 1e-6;
    pub const PF: f64 = 1e-12;
    pub const NH: f64 = 1e-9;
    pub const GHZ: f64 = 1e9;

    // Conversions divide or multiply by exact integers so that decimal
    // inputs such as 1.5748 mm land on the nearest double of 1.5748e-3.
    pub fn mm(x: f64) -> f64 {
        x / 1e3
    }
    pub fn to_mm(m: f64) -> f64 {
        m * 1e3
    }
    pub fn to_cm(m: f64) -> f64 {
        m * 1e2
    }
    pub fn from_cm(cm: f64) -> f64 {
        cm / 1e2
    }
    pub fn to_um(m: f64) -> f64 {
        m * 1e6
    }
    pub fn from_um(um: f64) -> f64 {
        um / 1e6
    }
}

/// Dielectric substrate of the board.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubstrateSpec {
    pub epsilon_r: f64,
    /// Thickness [m].
    pub h: f64,
}

impl SubstrateSpec {
    pub fn new(epsilon_r: f64, h: f64) -> Result<Self> {
        if !(epsilon_r >= 1.0) || !epsilon_r.is_finite() {
            return Err(invalid("substrate", format!("epsilon_r must be >= 1, got {epsilon_r}")));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(invalid("substrate", format!("thickness h must be > 0, got {h}")));
        }
        Ok(Self { epsilon_r, h })
    }

    /// Fused-quartz board of the reference design: ε_r = 3.8, h = 1.5748 mm.
    pub fn paper_default() -> Self {
        Self {
            epsilon_r: 3.8,
            h: units::mm(1.5748),
        }
    }
}

/// One interdigital capacitor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdcGeometry {
    pub n_fingers: u32,
    /// Finger length l [m].
    pub finger_length: f64,
    /// Finger width W′ [m].
    pub finger_width: f64,
    /// Gap S between adjacent fingers [m].
    pub gap: f64,
    /// Finger-base width w [m].
    pub base_width: f64,
}

impl IdcGeometry {
    pub fn new(n_fingers: u32, finger_length: f64, finger_width: f64, gap: f64, base_width: f64) -> Result<Self> {
        if n_fingers < 1 {
            return Err(invalid("idc geometry", "n_fingers must be >= 1"));
        }
        for (name, v) in [
            ("finger_length", finger_length),
            ("finger_width", finger_width),
            ("gap", gap),
            ("base_width", base_width),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid("idc geometry", format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self {
            n_fingers,
            finger_length,
            finger_width,
            gap,
            base_width,
        })
    }

    /// l = 0.86 mm, W′ = S = w = 0.4 mm with the given finger count.
    pub fn paper_default(n_fingers: u32) -> Self {
        Self {
            n_fingers,
            finger_length: units::mm(0.86),
            finger_width: units::mm(0.4),
            gap: units::mm(0.4),
            base_width: units::mm(0.4),
        }
    }

    pub fn with_fingers(self, n_fingers: u32) -> Result<Self> {
        Self::new(
            n_fingers,
            self.finger_length,
            self.finger_width,
            self.gap,
            self.base_width,
        )
    }

    pub fn with_finger_length(self, finger_length: f64) -> Result<Self> {
        Self::new(
            self.n_fingers,
            finger_length,
            self.finger_width,
            self.gap,
            self.base_width,
        )
    }
}

/// J-shaped patch dimensions [m]. Recorded for documentation only; no
/// closed-form model consumes them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PatchDimensions {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
}

impl Default for PatchDimensions {
    fn default() -> Self {
        Self {
            l1: units::mm(3.1),
            l2: units::mm(0.47),
            l3: units::mm(0.45),
            l4: units::mm(2.66),
            s1: units::mm(0.1),
            s2: units::mm(0.74),
            s3: units::mm(0.81),
            s4: units::mm(0.1),
        }
    }
}

/// The periodic cell and the cascade it forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellGeometry {
    /// Period p [m].
    pub period: f64,
    pub idc: IdcGeometry,
    /// Mutual gap between adjacent cells [m].
    pub cell_gap: f64,
    pub n_cells: u32,
    pub patch: PatchDimensions,
}

impl CellGeometry {
    pub fn new(period: f64, idc: IdcGeometry, cell_gap: f64, n_cells: u32) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(invalid("cell geometry", format!("period must be > 0, got {period}")));
        }
        if n_cells < 1 {
            return Err(invalid("cell geometry", "n_cells must be >= 1"));
        }
        if !(cell_gap >= 0.0) {
            return Err(invalid(
                "cell geometry",
                format!("cell_gap must be >= 0, got {cell_gap}"),
            ));
        }
        Ok(Self {
            period,
            idc,
            cell_gap,
            n_cells,
            patch: PatchDimensions::default(),
        })
    }

    /// p = 3.2 mm, eight cells, 4-finger IDCs.
    pub fn paper_default() -> Self {
        Self {
            period: units::mm(3.2),
            idc: IdcGeometry::paper_default(4),
            cell_gap: units::mm(0.1),
            n_cells: 8,
            patch: PatchDimensions::default(),
        }
    }

    pub fn with_fingers(self, n_fingers: u32) -> Result<Self> {
        Ok(Self {
            idc: self.idc.with_fingers(n_fingers)?,
            ..self
        })
    }
}

/// Switch configuration of the reconfigurable IDC.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SwitchState {
    AllOff,
    UpperOff,
    AllOn,
}

impl SwitchState {
    pub const ALL: [SwitchState; 3] = [SwitchState::AllOff, SwitchState::UpperOff, SwitchState::AllOn];

    pub fn finger_count(self) -> u32 {
        match self {
            SwitchState::AllOff => 2,
            SwitchState::UpperOff => 3,
            SwitchState::AllOn => 4,
        }
    }

    pub fn from_fingers(n: u32) -> Option<Self> {
        match n {
            2 => Some(SwitchState::AllOff),
            3 => Some(SwitchState::UpperOff),
            4 => Some(SwitchState::AllOn),
            _ => None,
        }
    }
}

pub fn finger_count_for_state(state: SwitchState) -> u32 {
    state.finger_count()
}
