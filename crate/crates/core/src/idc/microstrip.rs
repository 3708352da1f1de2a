//! Quasi-static microstrip line formulas (Hammerstad).

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::geometry::PHYSICAL;

/// Effective permittivity of a microstrip of width `w` on a substrate of thickness `h`.
pub fn effective_permittivity(w: f64, h: f64, epsilon_r: f64) -> Result<f64> {
    check(w, h, epsilon_r)?;
    let u = w / h;
    let mut fill = (1.0 + 12.0 / u).powf(-0.5);
    if u <= 1.0 {
        fill += 0.04 * (1.0 - u).powi(2);
    }
    Ok(0.5 * (epsilon_r + 1.0) + 0.5 * (epsilon_r - 1.0) * fill)
}

/// Characteristic impedance [Ω] of a microstrip of width `w` on a substrate of thickness `h`.
pub fn characteristic_impedance(w: f64, h: f64, epsilon_r: f64) -> Result<f64> {
    let eps_eff = effective_permittivity(w, h, epsilon_r)?;
    let u = w / h;
    let eta0 = PHYSICAL.eta0;
    let z0 = if u <= 1.0 {
        eta0 / (2.0 * PI * eps_eff.sqrt()) * (8.0 / u + 0.25 * u).ln()
    } else {
        eta0 / (eps_eff.sqrt() * (u + 1.393 + 0.667 * (u + 1.444).ln()))
    };
    Ok(z0)
}

fn check(w: f64, h: f64, epsilon_r: f64) -> Result<()> {
    if !(w > 0.0 && h > 0.0) {
        return Err(invalid("microstrip", format!("w and h must be > 0, got w={w}, h={h}")));
    }
    if !(epsilon_r >= 1.0) {
        return Err(invalid(
            "microstrip",
            format!("epsilon_r must be >= 1, got {epsilon_r}"),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifty_ohm_line_on_fr4() {
        // w/h ≈ 1.9 on ε_r = 4.4 is the textbook 50 Ω line.
        let z = characteristic_impedance(3.04e-3, 1.6e-3, 4.4).unwrap();
        assert!((z - 50.0).abs() < 1.0, "z = {z}");
    }

    #[test]
    fn air_line_has_unit_permittivity() {
        let e = effective_permittivity(1e-3, 1e-3, 1.0).unwrap();
        assert!((e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn narrow_and_wide_branches_meet() {
        let lo = characteristic_impedance(1.0e-3 - 1e-12, 1e-3, 3.8).unwrap();
        let hi = characteristic_impedance(1.0e-3 + 1e-12, 1e-3, 3.8).unwrap();
        assert!((lo - hi).abs() / lo < 0.01);
    }

    #[test]
    fn impedance_falls_with_width() {
        let mut prev = f64::INFINITY;
        for i in 1..40 {
            let z = characteristic_impedance(i as f64 * 0.1e-3, 1.5748e-3, 3.8).unwrap();
            assert!(z < prev);
            prev = z;
        }
    }
}
