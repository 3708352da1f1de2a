//! Deterministic CSV and JSON emission.
//!
//! Every number is written with nine significant digits in scientific
//! notation, so identical inputs give byte-identical files.

use std::fmt::Write;
use std::str::FromStr;

use serde_json::{Number, Value};

use crate::dispersion::{DispersionPoint, ScanSample};
use crate::radiation::RadiationPattern;

pub const DISPERSION_HEADER: &str =
    "f_Hz,beta_rad_per_m,alpha_Np_per_m,k0_rad_per_m,beta_p_over_pi,region,scan_angle_deg";
pub const SCAN_HEADER: &str = "f_Hz,scan_angle_deg";
pub const PATTERN_HEADER: &str = "theta_deg,magnitude_db";
pub const POLAR_HEADER: &str = "polar_angle_deg,theta_deg,magnitude_db";

/// `x` with nine significant digits, e.g. `8.66586667e-14`.
pub fn sci(x: f64) -> String {
    if x == 0.0 {
        // Drop the sign of negative zero.
        return format!("{:.8e}", 0.0);
    }
    format!("{x:.8e}")
}

/// JSON number carrying the [`sci`] text; `null` when not finite.
pub fn json_num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Number::from_str(&sci(x)).map(Value::Number).unwrap_or(Value::Null)
}

pub fn to_json_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn dispersion_csv(points: &[DispersionPoint], period: f64) -> String {
    let mut out = String::with_capacity(points.len() * 100);
    out.push_str(DISPERSION_HEADER);
    out.push('\n');
    for p in points {
        let angle = p.scan_angle_deg().map(sci).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sci(p.f),
            sci(p.beta),
            sci(p.alpha),
            sci(p.k0),
            sci(p.beta_p_over_pi(period)),
            p.region,
            angle
        );
    }
    out
}

pub fn dispersion_json(points: &[DispersionPoint], period: f64) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                serde_json::json!({
                    "f_Hz": json_num(p.f),
                    "beta_rad_per_m": json_num(p.beta),
                    "alpha_Np_per_m": json_num(p.alpha),
                    "k0_rad_per_m": json_num(p.k0),
                    "beta_p_over_pi": json_num(p.beta_p_over_pi(period)),
                    "region": p.region.as_str(),
                    "scan_angle_deg": p.scan_angle_deg().map(json_num).unwrap_or(Value::Null),
                })
            })
            .collect(),
    )
}

pub fn scan_csv(samples: &[ScanSample]) -> String {
    let mut out = String::new();
    out.push_str(SCAN_HEADER);
    out.push('\n');
    for s in samples {
        let _ = writeln!(out, "{},{}", sci(s.f), sci(s.theta_deg));
    }
    out
}

pub fn scan_json(samples: &[ScanSample]) -> Value {
    Value::Array(
        samples
            .iter()
            .map(|s| serde_json::json!({"f_Hz": json_num(s.f), "scan_angle_deg": json_num(s.theta_deg)}))
            .collect(),
    )
}

pub fn pattern_csv(p: &RadiationPattern) -> String {
    let mut out = String::new();
    out.push_str(PATTERN_HEADER);
    out.push('\n');
    for (t, m) in p.theta_deg.iter().zip(&p.magnitude_db) {
        let _ = writeln!(out, "{},{}", sci(*t), sci(*m));
    }
    out
}

/// Pattern ordered by polar-plot angle 90° − θ, so broadside sits at 90°
/// and backward angles come last.
pub fn pattern_polar_csv(p: &RadiationPattern) -> String {
    let mut rows: Vec<(f64, f64, f64)> = p
        .theta_deg
        .iter()
        .zip(&p.magnitude_db)
        .map(|(&t, &m)| (90.0 - t, t, m))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = String::new();
    out.push_str(POLAR_HEADER);
    out.push('\n');
    for (polar, t, m) in rows {
        let _ = writeln!(out, "{},{},{}", sci(polar), sci(t), sci(m));
    }
    out
}

pub fn pattern_summary(p: &RadiationPattern) -> Value {
    serde_json::json!({
        "f_Hz": json_num(p.f),
        "main_beam_deg": json_num(p.main_beam_deg),
        "beamwidth_3db_deg": json_num(p.beamwidth_3db_deg),
    })
}
