//! ABCD (transmission) matrices of lumped two-ports.

use std::f64::consts::PI;
use std::ops::Mul;

use num_complex::Complex64;
use serde::Serialize;

use crate::cell::CrlhUnitCell;
use crate::error::{invalid, CrlhError, Result};

/// Transmission matrix `[[a, b], [c, d]]` relating (V₁, I₁) to (V₂, I₂).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoPortAbcd {
    pub a: Complex64,
    /// [Ω]
    pub b: Complex64,
    /// [S]
    pub c: Complex64,
    pub d: Complex64,
}

impl TwoPortAbcd {
    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    /// Series impedance `z` [Ω].
    pub fn series(z: Complex64) -> Self {
        Self {
            b: z,
            ..Self::identity()
        }
    }

    /// Shunt admittance `y` [S].
    pub fn shunt(y: Complex64) -> Self {
        Self {
            c: y,
            ..Self::identity()
        }
    }

    pub fn cascade(&self, next: &Self) -> Self {
        Self {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
        }
    }

    /// `n`-fold cascade of identical sections, by repeated squaring.
    pub fn pow(&self, mut n: u32) -> Self {
        let mut result = Self::identity();
        let mut base = *self;
        while n > 0 {
            if n & 1 == 1 {
                result = result.cascade(&base);
            }
            base = base.cascade(&base);
            n >>= 1;
        }
        result
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d].iter().all(|z| z.is_finite())
    }
}

impl Mul for TwoPortAbcd {
    type Output = TwoPortAbcd;

    fn mul(self, rhs: TwoPortAbcd) -> TwoPortAbcd {
        self.cascade(&rhs)
    }
}

/// Total series impedance (R + jωL_R + 1/(jωC_L)) of one cell [Ω].
pub fn series_impedance(cell: &CrlhUnitCell, f: f64) -> Complex64 {
    let w = 2.0 * PI * f;
    Complex64::new(cell.r_series, w * cell.l_r - 1.0 / (w * cell.c_l))
}

/// Shunt admittance (jωC_R + 1/(jωL_L)) of one cell [S].
pub fn shunt_admittance(cell: &CrlhUnitCell, f: f64) -> Complex64 {
    let w = 2.0 * PI * f;
    Complex64::new(0.0, w * cell.c_r - 1.0 / (w * cell.l_l))
}

/// Symmetric-T cell: Z/2, shunt Y, Z/2.
///
/// The shunt tank enters as an admittance, which vanishes rather than
/// diverges at the shunt resonance, so no pole arises for f > 0.
pub fn unit_cell_abcd(cell: &CrlhUnitCell, f: f64) -> Result<TwoPortAbcd> {
    if !(f > 0.0) || !f.is_finite() {
        return Err(invalid("frequency", format!("must be > 0, got {f}")));
    }
    let half = TwoPortAbcd::series(series_impedance(cell, f) * 0.5);
    let m = half * TwoPortAbcd::shunt(shunt_admittance(cell, f)) * half;
    if !m.is_finite() {
        return Err(CrlhError::Pole { frequency: f });
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::calibrate_balanced;

    fn cell() -> CrlhUnitCell {
        calibrate_balanced(0.04335e-12, 9.3e9, 50.0, 3.2e-3).unwrap()
    }

    #[test]
    fn reciprocal_and_symmetric() {
        let mut unbalanced = cell();
        unbalanced.c_r *= 1.37;
        for c in [cell(), unbalanced, cell().with_series_resistance(2.0).unwrap()] {
            for i in 0..200 {
                let f = 1e8 + i as f64 * 1e8;
                let m = unit_cell_abcd(&c, f).unwrap();
                let scale = 1.0 + (m.b * m.c).norm();
                assert!((m.determinant() - 1.0).norm() <= 1e-10 * scale, "det at {f}");
                assert!((m.a - m.d).norm() <= 1e-10 * m.a.norm().max(1.0), "a != d at {f}");
            }
        }
    }

    #[test]
    fn series_capacitor_blocks_dc() {
        let c = cell();
        let b_lo = unit_cell_abcd(&c, 1.0).unwrap().b.norm();
        let b_hi = unit_cell_abcd(&c, 1e6).unwrap().b.norm();
        assert!(b_lo > 1e3 * b_hi);
        assert!(b_lo > 1e12);
    }

    #[test]
    fn closed_form_entries() {
        let c = cell();
        let f = 8.7e9;
        let z = series_impedance(&c, f);
        let y = shunt_admittance(&c, f);
        let m = unit_cell_abcd(&c, f).unwrap();
        let a = 1.0 + z * y / 2.0;
        assert!((m.a - a).norm() < 1e-12);
        assert!((m.b - z * (1.0 + z * y / 4.0)).norm() < 1e-9 * m.b.norm());
        assert!((m.c - y).norm() < 1e-15);
    }

    #[test]
    fn shunt_resonance_is_finite() {
        let mut c = cell();
        c.c_r *= 1.2;
        let f_sh = crate::cell::resonances(&c).f_sh();
        assert!(unit_cell_abcd(&c, f_sh).unwrap().is_finite());
    }

    #[test]
    fn power_matches_repeated_cascade() {
        let m = unit_cell_abcd(&cell(), 9.1e9).unwrap();
        let mut slow = TwoPortAbcd::identity();
        for _ in 0..7 {
            slow = slow * m;
        }
        let fast = m.pow(7);
        for (x, y) in [(slow.a, fast.a), (slow.b, fast.b), (slow.c, fast.c), (slow.d, fast.d)] {
            assert!((x - y).norm() <= 1e-9 * (1.0 + x.norm()));
        }
        assert_eq!(m.pow(0), TwoPortAbcd::identity());
    }

    #[test]
    fn rejects_nonpositive_frequency() {
        assert!(unit_cell_abcd(&cell(), 0.0).is_err());
        assert!(unit_cell_abcd(&cell(), -1.0).is_err());
    }
}
