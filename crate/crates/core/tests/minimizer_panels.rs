//! Minimizer behaviour on the low-k panel.

use spectra_core::bounds::alpha_star;
use spectra_core::calculus::BandSolver;
use spectra_core::minimizer::{
    count_sign_changes, find_minima, large_alpha_asymptote_check, search_solver, uniqueness_scan,
};
use spectra_core::{OperatorSpec, SpectraError};

#[test]
fn odd_minima_are_interior_and_shrinking() {
    let ks = [1u32, 3, 5, 7, 9];
    let reports: Vec<_> = find_minima::<f64>(&ks).into_iter().map(Result::unwrap).collect();
    for (k, r) in ks.iter().zip(&reports) {
        let solver = search_solver::<f64>(*k).unwrap();
        assert!(r.violations(&solver).unwrap().is_empty(), "k={k}: {:?}", r.violations(&solver));
        assert!(r.alpha_min > 0.0 && r.alpha_min <= alpha_star(*k).unwrap());
        assert_eq!(r.derivative_sign_changes, 1, "k={k}");
        assert!(r.certificate.certified(), "k={k}");
        for d in [-1e-3, 1e-3] {
            assert!(solver.lambda1(r.alpha_min + d).unwrap() > r.lambda_star, "k={k} d={d}");
        }
    }
    for w in reports.windows(2) {
        assert!(w[1].alpha_min < w[0].alpha_min);
    }
    assert!(reports[4].alpha_min < 0.06);
}

#[test]
fn even_minima_sit_at_zero() {
    let ks = [2u32, 4, 6];
    for (k, r) in ks.iter().zip(find_minima::<f64>(&ks)) {
        let r = r.unwrap();
        assert_eq!(r.alpha_min, 0.0);
        assert!(r.d_lambda1.abs() <= 1e-6);
        assert!(r.certificate.second_derivative_fd > 0.0, "k={k}");
        assert_eq!(r.derivative_sign_changes, 1, "k={k}");
        let solver = search_solver::<f64>(*k).unwrap();
        for d in [-1e-3, 1e-3] {
            assert!(solver.lambda1(d).unwrap() > r.lambda_star);
        }
    }
}

#[test]
fn uniqueness_scan_examples() {
    for k in [1u32, 3] {
        let hi = alpha_star::<f64>(k).unwrap() + 0.25;
        assert_eq!(uniqueness_scan(k, (-0.25, hi), 400).unwrap(), 1, "k={k}");
    }
    assert_eq!(uniqueness_scan(2, (-1.0, 1.0), 400).unwrap(), 1);
    assert!(matches!(uniqueness_scan(2, (-1.0f64, 1.0), 50), Err(SpectraError::InvalidParameter(_))));
}

#[test]
fn sign_change_counting() {
    assert_eq!(count_sign_changes([1.0, 0.5, -0.1, -2.0, 3.0], 1e-10), 2);
    assert_eq!(count_sign_changes([-1.0, 1e-12, -1e-12, -1.0], 1e-10), 0);
    assert_eq!(count_sign_changes(Vec::<f64>::new(), 1e-10), 0);
}

#[test]
fn large_alpha_ratio_tends_to_one() {
    for k in [1u32, 2, 3] {
        let r50 = large_alpha_asymptote_check(k, 50.0f64).unwrap();
        let r200 = large_alpha_asymptote_check(k, 200.0f64).unwrap();
        assert!(r50 > 0.8 && r50 < 1.2, "k={k}: {r50}");
        assert!((r200 - 1.0).abs() < (r50 - 1.0).abs(), "k={k}: {r50} {r200}");
    }
    assert!(matches!(large_alpha_asymptote_check(1, 5.0f64), Err(SpectraError::Precondition(_))));
}

#[test]
fn negative_alpha_is_a_barrier_for_odd_k() {
    for k in [1u32, 3, 5] {
        let lam = BandSolver::<f64>::new(k, -3.0, -3.0).unwrap().lambda1(-3.0).unwrap();
        assert!(lam >= 9.0, "k={k}: {lam}");
        assert!(OperatorSpec::whole_line(k, -3.0f64).unwrap().potential(0.0) == 9.0);
    }
}

#[test]
fn single_precision_minimum() {
    let r = spectra_core::minimizer::find_minimum::<f32>(1).unwrap();
    assert!((r.alpha_min - 0.3468).abs() < 5e-3, "{}", r.alpha_min);
    assert!((r.lambda_star - 0.5698).abs() < 5e-3, "{}", r.lambda_star);
}
