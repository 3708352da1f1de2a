//! Reference computations kept independent of the library's evaluation paths.
#![allow(dead_code)]

use std::f64::consts::PI;

use crlh_core::cell::CrlhUnitCell;
use crlh_core::network::TwoPortAbcd;

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// ∫ f over [a, b] by adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adaptive(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ).
pub fn quad_k(k: f64) -> f64 {
    let integrand = move |t: f64| 1.0 / (1.0 - k * k * t.sin().powi(2)).sqrt();
    integrate(&integrand, 0.0, PI / 2.0, 1e-13)
}

/// K(k)/K(√(1−k²)) by quadrature.
pub fn quad_ratio(k: f64) -> f64 {
    quad_k(k) / quad_k((1.0 - k * k).sqrt())
}

/// cos(βp) of the lossless T cell straight from the element values:
/// 1 + ZY/2 with Z = j(ωL_R − 1/ωC_L), Y = j(ωC_R − 1/ωL_L).
pub fn half_trace_from_elements(cell: &CrlhUnitCell, f: f64) -> f64 {
    let w = 2.0 * PI * f;
    let x = w * cell.l_r - 1.0 / (w * cell.c_l);
    let b = w * cell.c_r - 1.0 / (w * cell.l_l);
    1.0 - 0.5 * x * b
}

/// |β|p from the element values, or `None` in a stop band.
pub fn abs_beta_p(cell: &CrlhUnitCell, f: f64) -> Option<f64> {
    let t = half_trace_from_elements(cell, f);
    (t.abs() <= 1.0).then(|| t.acos())
}

/// M^n by n−1 plain multiplications.
pub fn naive_power(m: &TwoPortAbcd, n: u32) -> TwoPortAbcd {
    let mut acc = *m;
    for _ in 1..n {
        acc = TwoPortAbcd {
            a: acc.a * m.a + acc.b * m.c,
            b: acc.a * m.b + acc.b * m.d,
            c: acc.c * m.a + acc.d * m.c,
            d: acc.c * m.b + acc.d * m.d,
        };
    }
    acc
}

/// Brute-force |AF(θ)| maximum over a fine grid, in degrees.
pub fn brute_force_peak(beta: f64, alpha: f64, period: f64, n_cells: u32, f: f64) -> f64 {
    let k0 = 2.0 * PI * f / 299_792_458.0;
    let mut best = (f64::NEG_INFINITY, 0.0);
    for i in 0..=180_000 {
        let theta = -90.0 + i as f64 * 1e-3;
        let s = theta.to_radians().sin();
        let (mut re, mut im) = (0.0, 0.0);
        for n in 0..n_cells {
            let n = n as f64;
            let amp = (-n * alpha * period).exp();
            let ph = n * period * (k0 * s - beta);
            re += amp * ph.cos();
            im += amp * ph.sin();
        }
        let mag = re.hypot(im);
        if mag > best.0 {
            best = (mag, theta);
        }
    }
    best.1
}
