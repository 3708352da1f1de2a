//! Ratio of complete elliptic integrals of the first kind.
//!
//! The IDC gap capacitance depends on K(k)/K′(k), K′(k) = K(√(1−k²)).
//! Extraction uses the two logarithmic closed forms, each accurate on its
//! own side of k = 1/√2. [`complete_elliptic_k`] is an exact AGM evaluator
//! kept for verification; the extraction path never calls it.

use std::f64::consts::PI;

use crate::error::{CrlhError, Result};

/// Crossover between the two closed forms.
pub const BRANCH_POINT: f64 = 0.707;

fn log_term(x: f64) -> f64 {
    let s = x.sqrt();
    (2.0 * (1.0 + s) / (1.0 - s)).ln()
}

/// K(k)/K′(k) from the piecewise closed forms, modulus convention (not parameter m = k²).
pub fn elliptic_ratio(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(CrlhError::Domain {
            function: "elliptic_ratio",
            reason: format!("modulus must satisfy 0 < k < 1, got {k}"),
        });
    }
    if k >= BRANCH_POINT {
        Ok(upper_branch(k))
    } else {
        Ok(lower_branch(k))
    }
}

/// Closed form accurate for k near 1.
pub fn upper_branch(k: f64) -> f64 {
    log_term(k) / PI
}

/// Closed form accurate for k near 0.
pub fn lower_branch(k: f64) -> f64 {
    let k_prime = (1.0 - k * k).sqrt();
    PI / log_term(k_prime)
}

/// Complete elliptic integral of the first kind K(k) by the arithmetic-geometric mean.
pub fn complete_elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(CrlhError::Domain {
            function: "complete_elliptic_k",
            reason: format!("modulus must satisfy 0 <= k < 1, got {k}"),
        });
    }
    let mut a = 1.0;
    let mut g = (1.0 - k * k).sqrt();
    for _ in 0..64 {
        if (a - g).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = next;
    }
    Ok(PI / (2.0 * a))
}

/// K(k)/K′(k) from [`complete_elliptic_k`].
pub fn exact_elliptic_ratio(k: f64) -> Result<f64> {
    if !(k > 0.0 && k < 1.0) {
        return Err(CrlhError::Domain {
            function: "exact_elliptic_ratio",
            reason: format!("modulus must satisfy 0 < k < 1, got {k}"),
        });
    }
    let k_prime = (1.0 - k * k).sqrt();
    Ok(complete_elliptic_k(k)? / complete_elliptic_k(k_prime)?)
}
