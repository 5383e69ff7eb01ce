//! Closed-form values checked through the public API.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use keldysh_core::basis::{zernike_norm_sq, GammaParam, ZernikeIndex};
use keldysh_core::verify::{cm_value, coercivity_constant, ell_of_eps, log_mass};

#[test]
fn disk_eigenvalues_at_zero() {
    let g = GammaParam::new(0.0).unwrap();
    let mut values: Vec<f64> = (0..3).flat_map(|n| (0..=n).map(move |_| g.eigenvalue(n))).collect();
    values.sort_by(f64::total_cmp);
    assert_eq!(values, vec![1.0, 4.0, 4.0, 9.0, 9.0, 9.0]);
}

#[test]
fn constant_norm_is_the_beta_integral() {
    // ∫ x^γ dV = π/(γ+1)
    for g in [0.0, 0.5, 1.5] {
        assert_relative_eq!(zernike_norm_sq(g, ZernikeIndex::new(0, 0).unwrap()), PI / (g + 1.0), max_relative = 1e-14);
    }
    assert_relative_eq!(zernike_norm_sq(0.5, ZernikeIndex::new(0, 0).unwrap()), 2.0 * PI / 3.0, max_relative = 1e-15);
}

#[test]
fn lowest_cm_constant_is_an_odd_zeta_sum() {
    // γ = 0, s = 2, m = 0: (1/π)Σ(2ℓ+1)^{−3}, summed directly with an integral tail
    let n = 200_000usize;
    let head: f64 = (0..n).rev().map(|l| (2.0 * l as f64 + 1.0).powi(-3)).sum();
    let tail = 1.0 / (4.0 * (2.0 * n as f64).powi(2));
    assert_relative_eq!(cm_value(2.0, 0.0, 0).unwrap(), (head + tail) / PI, max_relative = 1e-10);
}

#[test]
fn coercivity_constant_at_default() {
    assert_relative_eq!(coercivity_constant(4.0), 0.25 * (1.0 + 4f64.exp()).ln(), max_relative = 1e-15);
    assert!(coercivity_constant(4.0) > 1.0);
}

#[test]
fn ell_fixes_one_and_log_mass_is_finite() {
    assert_eq!(ell_of_eps(1.0).unwrap(), 1.0);
    for l in [1e-9, 1e-3, 0.5] {
        assert!(log_mass(l).is_finite() && log_mass(l) > 0.0);
    }
}
