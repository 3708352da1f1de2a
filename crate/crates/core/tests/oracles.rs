mod common;

use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;

use crlh_core::cell::{calibrate_balanced, is_balanced, CrlhUnitCell};
use crlh_core::dispersion::{bloch_at, dispersion_sweep, locate_transition, scan_angle, transition_frequency, Region};
use crlh_core::geometry::{units, IdcGeometry, SubstrateSpec};
use crlh_core::idc::{c_series_gap, elliptic, modulus_from_geometry};
use crlh_core::network::unit_cell_abcd;
use crlh_core::radiation::{array_factor, theta_grid};

fn reference_cell() -> CrlhUnitCell {
    calibrate_balanced(0.5 * 0.0867e-12, 9.3e9, 50.0, 5e-3).unwrap()
}

#[test]
fn closed_form_ratio_tracks_quadrature_near_unity() {
    let k = 0.99;
    let err = (elliptic::elliptic_ratio(k).unwrap() / common::quad_ratio(k) - 1.0).abs();
    assert!(err < 5e-3, "relative error {err}");
}

#[test]
fn agm_ratio_matches_quadrature() {
    for i in 1..40 {
        let k = i as f64 / 40.0;
        assert_relative_eq!(
            elliptic::exact_elliptic_ratio(k).unwrap(),
            common::quad_ratio(k),
            epsilon = 0.0,
            max_relative = 1e-9
        );
    }
}

#[test]
fn quadrature_ratio_is_one_at_self_dual_modulus() {
    assert_relative_eq!(
        common::quad_ratio(0.5f64.sqrt()),
        1.0,
        epsilon = 0.0,
        max_relative = 1e-12
    );
}

#[test]
fn gap_capacitance_from_quadrature() {
    let g = IdcGeometry::paper_default(4);
    let sub = SubstrateSpec::paper_default();
    let k = (PI / 8.0).tan().powi(2);
    assert_relative_eq!(modulus_from_geometry(&g).k, k, epsilon = 0.0, max_relative = 1e-14);
    let expected_pf = 1e-3 * 3.8 / (18.0 * PI) * common::quad_ratio(k) * 3.0 * 860.0;
    let c = c_series_gap(&g, &sub).unwrap() / units::PF;
    assert_relative_eq!(c, expected_pf, epsilon = 0.0, max_relative = 1e-5);
}

#[test]
fn lossless_phase_matches_element_relation() {
    let cell = reference_cell();
    for p in dispersion_sweep(&cell, 1e9, 30e9, 300).unwrap() {
        match common::abs_beta_p(&cell, p.f) {
            Some(bp) => {
                assert_ne!(p.region, Region::Evanescent, "f = {}", p.f);
                assert!((p.beta.abs() * cell.period - bp).abs() < 1e-9, "f = {}", p.f);
                assert!(p.alpha.abs() < 1e-9);
            }
            None => assert_eq!(p.region, Region::Evanescent, "f = {}", p.f),
        }
    }
}

#[test]
fn phase_sign_follows_the_transition() {
    let cell = reference_cell();
    for p in dispersion_sweep(&cell, 5e9, 15e9, 201).unwrap() {
        if p.region != Region::Evanescent && (p.f - 9.3e9).abs() > 1e7 {
            assert_eq!(p.beta < 0.0, p.f < 9.3e9, "f = {}", p.f);
        }
    }
}

#[test]
fn array_factor_peak_matches_brute_force() {
    let theta = theta_grid(0.25).unwrap();
    for &(beta, alpha) in &[(-80.0, 0.0), (0.0, 1.0), (120.0, 5.0), (-150.0, 10.0)] {
        let f = 10e9;
        let pat = array_factor(Complex64::new(alpha, beta), 5e-3, 8, f, &theta).unwrap();
        let brute = common::brute_force_peak(beta, alpha, 5e-3, 8, f);
        assert!(
            (pat.main_beam_deg - brute).abs() <= 0.125 + 1e-9,
            "{} vs {brute}",
            pat.main_beam_deg
        );
    }
}

#[test]
fn larger_left_handed_capacitance_lowers_transition() {
    let base = reference_cell();
    let mut heavier = base;
    heavier.c_l *= 1.5;
    heavier.c_r = heavier.l_r * heavier.c_l / heavier.l_l;
    let f_base = transition_frequency(
        &base,
        locate_transition(&dispersion_sweep(&base, 2e9, 20e9, 181).unwrap()).unwrap(),
    )
    .unwrap();
    let f_heavy = transition_frequency(
        &heavier,
        locate_transition(&dispersion_sweep(&heavier, 2e9, 20e9, 181).unwrap()).unwrap(),
    )
    .unwrap();
    assert!(f_heavy < f_base);
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn scan_angle_is_odd(beta in -200.0f64..200.0, f in 9.6e9f64..12e9) {
        let pos = scan_angle(beta, f).unwrap();
        let neg = scan_angle(-beta, f).unwrap();
        prop_assert_eq!(pos, -neg);
    }

    #[test]
    fn calibrated_cell_transitions_at_target(
        c_l_pf in 0.01f64..1.0,
        f0_ghz in 3.0f64..15.0,
        zc in 20.0f64..120.0,
    ) {
        let f0 = f0_ghz * 1e9;
        let cell = calibrate_balanced(c_l_pf * 1e-12, f0, zc, 5e-3).unwrap();
        prop_assert!(is_balanced(&cell, 1e-9));
        // High-impedance cells have pass bands well under 1% wide.
        let sweep = dispersion_sweep(&cell, 0.9 * f0, 1.1 * f0, 4001).unwrap();
        let f = transition_frequency(&cell, locate_transition(&sweep).unwrap()).unwrap();
        prop_assert!((f - f0).abs() <= 1e3);
        prop_assert!(bloch_at(&cell, f0).unwrap().alpha.abs() < 1e-9);
    }

    #[test]
    fn cell_is_reciprocal_and_symmetric(f in 1e8f64..4e10) {
        let m = unit_cell_abcd(&reference_cell(), f).unwrap();
        let scale = (m.a * m.d).norm().max((m.b * m.c).norm()).max(1.0);
        prop_assert!((m.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12 * scale);
        prop_assert!((m.a - m.d).norm() <= 1e-12 * m.a.norm().max(1.0));
    }

    #[test]
    fn bloch_trace_matches_naive_power(f in 7.5e9f64..12e9, n in 1u32..12) {
        let cell = reference_cell().with_series_resistance(0.5).unwrap();
        let m = unit_cell_abcd(&cell, f).unwrap();
        let gamma = bloch_at(&cell, f).unwrap().gamma();
        let lhs = common::naive_power(&m, n).trace();
        let rhs = 2.0 * (Complex64::new(f64::from(n) * cell.period, 0.0) * gamma).cosh();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * rhs.norm());
    }
}
