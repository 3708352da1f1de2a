//! Lumped RLC′ model of an interdigital capacitor from its layout.
//!
//! The series gap capacitance from the elliptic-integral form is the value
//! used downstream. The finger-count approximation is kept as a cross-check.
//! Inductance and shunt capacitance follow the line-theory expressions with
//! √ε_r (not √ε_eff) and therefore do not depend on the finger count.

pub mod elliptic;
pub mod microstrip;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, CrlhError, Result};
use crate::geometry::{units, IdcGeometry, SubstrateSpec, C0};

pub use elliptic::{complete_elliptic_k, elliptic_ratio, exact_elliptic_ratio};

/// Interior-finger contribution of the approximation [pF/cm].
pub const A1_PF_PER_CM: f64 = 0.089;
/// Contribution of the two outer fingers [pF/cm].
pub const A2_PF_PER_CM: f64 = 0.1;

/// Extracted lumped elements of one IDC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdcLumpedModel {
    /// Series capacitance [F].
    pub c_series: f64,
    /// Shunt capacitance C′ on each side [F].
    pub c_shunt: f64,
    /// Series inductance [H].
    pub l_series: f64,
    /// Series resistance [Ω].
    pub r_series: f64,
    /// Line impedance used for `l_series` and `c_shunt` [Ω].
    pub z0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticModulus {
    pub k: f64,
    pub k_prime: f64,
    /// Half finger width [m].
    pub a: f64,
    /// Half finger pitch [m].
    pub b: f64,
}

pub fn modulus_from_geometry(g: &IdcGeometry) -> EllipticModulus {
    let a = 0.5 * g.finger_width;
    let b = 0.5 * (g.finger_width + g.gap);
    let k = (a * PI / (4.0 * b)).tan().powi(2);
    EllipticModulus {
        k,
        k_prime: (1.0 - k * k).sqrt(),
        a,
        b,
    }
}

/// Series gap capacitance [F] from the elliptic-integral expression.
///
/// Evaluated in the units the expression is stated in (l in μm, result in
/// pF) and converted back to farads.
pub fn c_series_gap(g: &IdcGeometry, sub: &SubstrateSpec) -> Result<f64> {
    let modulus = modulus_from_geometry(g);
    let ratio = elliptic_ratio(modulus.k)?;
    let l_um = units::to_um(g.finger_length);
    let pf = 1e-3 * sub.epsilon_r / (18.0 * PI) * ratio * f64::from(g.n_fingers - 1) * l_um;
    Ok(pf * units::PF)
}

/// How the leading length factor of the finger-count approximation is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ApproxReading {
    /// (ε_r+1)·l·[(N−3)A₁+A₂] with l in cm: pF/cm times cm gives pF.
    #[default]
    LengthInCm,
    /// (l/w)·(ε_r+1)·[(N−3)A₁+A₂] taken literally, the bracket read as pF.
    /// Overestimates the gap form by more than an order of magnitude on the
    /// reference layout.
    AspectRatio,
}

/// Series capacitance [F] from the finger-count approximation.
pub fn c_series_approx(g: &IdcGeometry, sub: &SubstrateSpec, reading: ApproxReading) -> Result<f64> {
    if g.n_fingers < 3 {
        return Err(CrlhError::Domain {
            function: "c_series_approx",
            reason: format!(
                "the interior-finger term (N-3) is negative for N = {}; N >= 3 required",
                g.n_fingers
            ),
        });
    }
    let bracket = f64::from(g.n_fingers - 3) * A1_PF_PER_CM + A2_PF_PER_CM;
    let factor = match reading {
        ApproxReading::LengthInCm => units::to_cm(g.finger_length),
        ApproxReading::AspectRatio => g.finger_length / g.base_width,
    };
    Ok(factor * (sub.epsilon_r + 1.0) * bracket * units::PF)
}

/// Series resistance [Ω] for sheet resistivity `sheet_resistivity` [Ω/□].
pub fn r_series(g: &IdcGeometry, sheet_resistivity: f64) -> Result<f64> {
    if !(sheet_resistivity >= 0.0) {
        return Err(invalid(
            "sheet resistivity",
            format!("must be >= 0, got {sheet_resistivity}"),
        ));
    }
    Ok(4.0 / 3.0 * g.finger_length / (g.finger_width * f64::from(g.n_fingers)) * sheet_resistivity)
}

/// Series inductance [H] and per-side shunt capacitance [F] from line theory.
pub fn l_c_from_line_theory(g: &IdcGeometry, sub: &SubstrateSpec, z0: f64) -> Result<(f64, f64)> {
    if !(z0 > 0.0) || !z0.is_finite() {
        return Err(invalid("line impedance", format!("z0 must be > 0, got {z0}")));
    }
    let sqrt_er = sub.epsilon_r.sqrt();
    let l = z0 * sqrt_er / C0 * g.finger_length;
    let c = 0.5 * sqrt_er / (z0 * C0) * g.finger_length;
    Ok((l, c))
}

/// Microstrip impedance of a single finger over the substrate.
pub fn default_z0(g: &IdcGeometry, sub: &SubstrateSpec) -> Result<f64> {
    microstrip::characteristic_impedance(g.finger_width, sub.h, sub.epsilon_r)
}

/// Inputs of the extraction that are not part of the layout.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExtractOptions {
    /// Sheet resistivity [Ω/□]; zero is a lossless conductor.
    pub sheet_resistivity: f64,
    /// Overrides the microstrip impedance derived from the finger width.
    pub z0: Option<f64>,
}

pub fn extract(g: &IdcGeometry, sub: &SubstrateSpec, opts: &ExtractOptions) -> Result<IdcLumpedModel> {
    let z0 = match opts.z0 {
        Some(z) => z,
        None => default_z0(g, sub)?,
    };
    let c_series = c_series_gap(g, sub)?;
    let r = r_series(g, opts.sheet_resistivity)?;
    let (l, c_shunt) = l_c_from_line_theory(g, sub, z0)?;
    Ok(IdcLumpedModel {
        c_series,
        c_shunt,
        l_series: l,
        r_series: r,
        z0,
    })
}
