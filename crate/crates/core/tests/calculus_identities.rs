//! Band-function identities checked against independent computations.

use proptest::prelude::*;

use spectra_core::calculus::{band_point, nondegeneracy_certificate, second_derivative_fd, virial_check, BandSolver};
use spectra_core::minimizer::find_minimum;

#[test]
fn hellmann_feynman_matches_central_differences() {
    let delta = 1e-4;
    for k in 1..=6u32 {
        for alpha in [0.0f64, 0.1, 0.35, 1.0] {
            let solver = BandSolver::new(k, alpha - delta, alpha + delta).unwrap();
            let p = solver.ground(alpha).unwrap();
            let fd = (solver.lambda1(alpha + delta).unwrap() - solver.lambda1(alpha - delta).unwrap()) / (2.0 * delta);
            assert!((p.d_lambda1 - fd).abs() <= 1e-4, "k={k} α={alpha}: {} vs {fd}", p.d_lambda1);
        }
    }
}

#[test]
fn derivative_at_zero_has_the_expected_sign() {
    let p = band_point(1, 0.0f64).unwrap();
    assert!(p.d_lambda1 < 0.0);
    for k in [2u32, 4, 6] {
        assert!(band_point(k, 0.0f64).unwrap().d_lambda1.abs() < 1e-6);
    }
}

#[test]
fn virial_examples_at_minima() {
    for (k, expect) in [(1u32, 0.19), (3, 0.136)] {
        let m = find_minimum::<f64>(k).unwrap();
        let p = band_point(k, m.alpha_min).unwrap();
        assert!((p.potential_norm_sq - expect).abs() < 0.005, "k={k}: {}", p.potential_norm_sq);
        assert!((p.kinetic_ratio() - (k as f64 + 1.0)).abs() < 1e-4);
        assert!(virial_check(k, m.alpha_min).unwrap().abs() < 1e-5);
        assert!((p.alpha - p.moment).abs() < 1e-6);
    }
}

#[test]
fn certificates_agree_with_direct_second_derivative() {
    for k in 1..=4u32 {
        let m = find_minimum::<f64>(k).unwrap();
        let c = nondegeneracy_certificate(k, m.alpha_min).unwrap();
        assert!(c.gap_value > 0.0 && c.second_derivative_lower > 0.0);
        assert!(c.second_derivative_fd > 0.0);
        assert!(c.second_derivative_fd >= c.second_derivative_lower - 1e-3);
    }
}

#[test]
fn second_derivative_positive_at_minima() {
    assert!(second_derivative_fd(2, 0.0f64, 1e-3).unwrap() > 0.0);
    let m = find_minimum::<f64>(1).unwrap();
    assert!(second_derivative_fd(1, m.alpha_min, 1e-3).unwrap() > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn energy_partition_everywhere(k in 1u32..8, alpha in -1.0f64..2.0) {
        let p = band_point(k, alpha).unwrap();
        prop_assert!(p.energy_defect().abs() < 1e-6);
        prop_assert!((p.d_lambda1 - 2.0 * (alpha - p.moment)).abs() < 1e-14);
    }

    #[test]
    fn even_k_band_is_even(k in 1u32..5, alpha in 0.05f64..1.5) {
        let k = 2 * k;
        let a = band_point(k, alpha).unwrap();
        let b = band_point(k, -alpha).unwrap();
        prop_assert!((a.lambda1 - b.lambda1).abs() < 1e-8);
        prop_assert!((a.d_lambda1 + b.d_lambda1).abs() < 1e-6);
    }
}
