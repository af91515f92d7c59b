//! Location and certification of the minimum of `α ↦ λ₁(Q^(k)(α))`.
//!
//! Odd `k`: the minimum lies in `[0, α∗]`. It is bracketed by golden-section
//! search on `λ₁` and then polished by safeguarded secant steps on the
//! Hellmann–Feynman derivative. Even `k`: `λ₁` is even in `α`, so the
//! minimizer is `α = 0`, and the report only verifies `∂_αλ₁(0) = 0` and
//! `∂²_αλ₁(0) > 0`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::alpha_star;
use crate::calculus::{certificate_from, BandSolver, NondegeneracyCertificate, CRITICAL_TOL, DEFAULT_FD_STEP};
use crate::error::{Result, SpectraError};
use crate::scalar::{pow_pos, Real};

/// Final width of the golden-section bracket.
pub const GOLDEN_WIDTH: f64 = 1e-6;
/// `|∂_αλ₁|` at which secant refinement stops.
pub const DERIVATIVE_TOL: f64 = 1e-8;
/// Samples used by [`find_minimum`] for its uniqueness scan.
pub const SCAN_SAMPLES: usize = 400;
/// Margin added on both sides of `[0, α∗]` for the scan.
pub const SCAN_MARGIN: f64 = 0.25;
/// Half-width of the even-`k` scan interval.
pub const EVEN_SCAN_HALF_WIDTH: f64 = 1.0;

const SECANT_MAX: usize = 60;
/// Derivative samples smaller than this carry no sign information.
const SIGN_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPointReport<T> {
    pub k: u32,
    pub alpha_min: T,
    /// `λ₁(α_min)`, the minimal ground state energy.
    pub lambda_star: T,
    pub lambda2: T,
    pub lambda3: T,
    /// `∂_αλ₁` at the reported minimum.
    pub d_lambda1: T,
    pub bracket: (T, T),
    pub derivative_sign_changes: usize,
    pub certificate: NondegeneracyCertificate<T>,
    pub scan_interval: (T, T),
    pub scan_resolution: usize,
    /// Secant steps spent after golden section (0 for even `k`).
    pub refinement_steps: usize,
}

impl<T: Real> CriticalPointReport<T> {
    /// Violations of the report's own invariants, as messages.
    pub fn violations(&self, solver: &BandSolver<T>) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let (a, b) = self.bracket;
        if !(a <= self.alpha_min && self.alpha_min <= b) {
            out.push(format!("bracket ({a}, {b}) misses alpha_min = {}", self.alpha_min));
        }
        for end in [a, b] {
            if !(solver.lambda1(end)? > self.lambda_star) {
                out.push(format!("lambda1({end}) does not exceed lambda_star"));
            }
        }
        if self.k % 2 == 1 {
            let cap = alpha_star::<T>(self.k)?;
            if !(self.alpha_min > T::zero() && self.alpha_min <= cap) {
                out.push(format!("alpha_min = {} outside (0, {cap}]", self.alpha_min));
            }
            if !(self.alpha_min * self.alpha_min < self.lambda_star) {
                out.push("alpha_min^2 >= lambda_star".into());
            }
        }
        Ok(out)
    }
}

/// Solver window used by [`find_minimum`] for `k`.
pub fn search_window<T: Real>(k: u32) -> Result<(T, T)> {
    if k % 2 == 1 {
        Ok((-T::lit(SCAN_MARGIN), alpha_star::<T>(k)? + T::lit(SCAN_MARGIN)))
    } else {
        Ok((-T::lit(EVEN_SCAN_HALF_WIDTH), T::lit(EVEN_SCAN_HALF_WIDTH)))
    }
}

/// The band solver [`find_minimum`] evaluates everything on.
pub fn search_solver<T: Real>(k: u32) -> Result<BandSolver<T>> {
    let (lo, hi) = search_window::<T>(k)?;
    BandSolver::new(k, lo, hi)
}

/// Golden-section search for the minimum of `f` on `[a, b]`; returns the
/// final bracket.
pub fn golden_section<T: Real>(mut f: impl FnMut(T) -> Result<T>, a: T, b: T, width: T) -> Result<(T, T)> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::two();
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok((a, b))
}

/// Zero of `g` near `[a, b]` by secant steps, falling back to bisection on
/// any bracketing pair when a step leaves `[lo, hi]`. Returns the point and
/// the number of steps taken.
fn secant_root<T: Real>(g: impl Fn(T) -> Result<T>, a: T, b: T, lo: T, hi: T, tol: T) -> Result<(T, T, usize)> {
    let (mut x0, mut x1) = (a, b);
    let (mut g0, mut g1) = (g(x0)?, g(x1)?);
    // Best bracketing pair seen so far.
    let mut neg: Option<(T, T)> = None;
    let mut pos: Option<(T, T)> = None;
    let note = |x: T, v: T, neg: &mut Option<(T, T)>, pos: &mut Option<(T, T)>| {
        if v < T::zero() {
            if neg.is_none_or(|(_, nv)| v > nv) {
                *neg = Some((x, v));
            }
        } else if pos.is_none_or(|(_, pv)| v < pv) {
            *pos = Some((x, v));
        }
    };
    note(x0, g0, &mut neg, &mut pos);
    note(x1, g1, &mut neg, &mut pos);
    for step in 1..=SECANT_MAX {
        if g1.abs() <= tol {
            return Ok((x1, g1, step - 1));
        }
        let mut x2 = if g1 != g0 { x1 - g1 * (x1 - x0) / (g1 - g0) } else { x1 };
        let stalled = x2 == x1 || !x2.is_finite();
        if stalled || x2 < lo || x2 > hi {
            match (neg, pos) {
                (Some((xn, _)), Some((xp, _))) => x2 = T::half() * (xn + xp),
                _ => {
                    return Err(SpectraError::NonConvergence(format!(
                        "secant left [{lo}, {hi}] without a sign change"
                    )))
                }
            }
        }
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = g(x1)?;
        note(x1, g1, &mut neg, &mut pos);
    }
    if g1.abs() <= tol {
        return Ok((x1, g1, SECANT_MAX));
    }
    Err(SpectraError::NonConvergence(format!(
        "derivative still {:e} after {SECANT_MAX} secant steps",
        g1.to_f64_lossy()
    )))
}

/// Locates and certifies the minimum of the band function of `k`.
pub fn find_minimum<T: Real>(k: u32) -> Result<CriticalPointReport<T>> {
    let solver = search_solver::<T>(k)?;
    find_minimum_with(&solver)
}

/// [`find_minimum`] on a caller-supplied solver; its window must contain the
/// scan interval `[-0.25, α∗ + 0.25]` (odd) or `[-1, 1]` (even).
pub fn find_minimum_with<T: Real>(solver: &BandSolver<T>) -> Result<CriticalPointReport<T>> {
    let k = solver.k();
    let scan_interval = search_window::<T>(k)?;
    let (wlo, whi) = solver.window();
    if wlo > scan_interval.0 || whi < scan_interval.1 {
        return Err(SpectraError::InvalidParameter(format!(
            "solver window ({wlo}, {whi}) does not cover the scan interval"
        )));
    }
    let step = T::lit(DEFAULT_FD_STEP);
    let (alpha_min, bracket, steps) = if k % 2 == 1 {
        let cap = alpha_star::<T>(k)?;
        let (a, b) = golden_section(|x| solver.lambda1(x), T::zero(), cap, T::lit(GOLDEN_WIDTH))?;
        let (x, _, steps) =
            secant_root(|x| solver.derivative(x), a, b, T::zero(), cap, T::lit(DERIVATIVE_TOL))?;
        (x, (T::zero(), cap), steps)
    } else {
        let half = T::lit(SCAN_MARGIN);
        (T::zero(), (-half, half), 0)
    };
    let p = solver.point(alpha_min)?;
    if k.is_multiple_of(2) && !(p.d_lambda1.abs() <= T::lit(CRITICAL_TOL)) {
        return Err(SpectraError::Precondition(format!(
            "d_lambda1(0) = {:e} for even k = {k}",
            p.d_lambda1.to_f64_lossy()
        )));
    }
    let fd = solver.second_derivative(alpha_min, step)?;
    let certificate = certificate_from(&p, fd);
    let lam_lo = solver.lambda1(bracket.0)?;
    let lam_hi = solver.lambda1(bracket.1)?;
    if !(lam_lo > p.lambda1 && lam_hi > p.lambda1) {
        return Err(SpectraError::Bracket(format!(
            "lambda1 at ({}, {}) = ({lam_lo}, {lam_hi}) not above {}",
            bracket.0, bracket.1, p.lambda1
        )));
    }
    let derivative_sign_changes = scan_with(solver, scan_interval, SCAN_SAMPLES)?;
    Ok(CriticalPointReport {
        k,
        alpha_min,
        lambda_star: p.lambda1,
        lambda2: p.lambda2,
        lambda3: p.lambda3,
        d_lambda1: p.d_lambda1,
        bracket,
        derivative_sign_changes,
        certificate,
        scan_interval,
        scan_resolution: SCAN_SAMPLES,
        refinement_steps: steps,
    })
}

/// [`find_minimum`] for several `k`, in parallel; output follows `ks`.
pub fn find_minima<T: Real>(ks: &[u32]) -> Vec<Result<CriticalPointReport<T>>> {
    ks.par_iter().map(|&k| find_minimum(k)).collect()
}

/// Number of sign changes of `∂_αλ₁` over `n_samples` uniform points of
/// `interval` (endpoints included).
pub fn uniqueness_scan<T: Real>(k: u32, interval: (T, T), n_samples: usize) -> Result<usize> {
    let solver = BandSolver::new(k, interval.0, interval.1)?;
    scan_with(&solver, interval, n_samples)
}

fn scan_with<T: Real>(solver: &BandSolver<T>, interval: (T, T), n_samples: usize) -> Result<usize> {
    if n_samples < 100 {
        return Err(SpectraError::InvalidParameter(format!("need at least 100 samples, got {n_samples}")));
    }
    let (a, b) = interval;
    if !(a < b) {
        return Err(SpectraError::InvalidParameter("empty scan interval".into()));
    }
    let last = T::of_usize(n_samples - 1);
    let alphas: Vec<T> = (0..n_samples).map(|i| a + (b - a) * T::of_usize(i) / last).collect();
    let points = solver.ground_batch(&alphas)?;
    Ok(count_sign_changes(points.iter().map(|p| p.d_lambda1), T::lit(SIGN_FLOOR)))
}

/// Sign changes in `values`, ignoring entries with `|v| <= floor`.
pub fn count_sign_changes<T: Real>(values: impl IntoIterator<Item = T>, floor: T) -> usize {
    let mut prev: Option<bool> = None;
    let mut changes = 0;
    for v in values {
        if v.abs() <= floor {
            continue;
        }
        let s = v > T::zero();
        if prev.is_some_and(|p| p != s) {
            changes += 1;
        }
        prev = Some(s);
    }
    changes
}

/// Leading semiclassical constant: `λ₁(α) ~ ((k+1)α)^(k/(k+1))` as `α → ∞`,
/// the harmonic approximation at the well bottom `t_c = ((k+1)α)^(1/(k+1))`,
/// where `V ≈ t_c^(2k) (t - t_c)²`.
pub fn semiclassical_leading<T: Real>(k: u32, alpha: T) -> T {
    let kt = T::of_usize(k as usize);
    pow_pos((kt + T::one()) * alpha, kt / (kt + T::one()))
}

/// `λ₁(α) / ((k+1)α)^(k/(k+1))` for `α ≥ 10`.
pub fn large_alpha_asymptote_check<T: Real>(k: u32, alpha: T) -> Result<T> {
    if !(alpha >= T::lit(10.0)) {
        return Err(SpectraError::Precondition(format!("alpha = {alpha} must be at least 10")));
    }
    let lambda = BandSolver::new(k, alpha, alpha)?.lambda1(alpha)?;
    Ok(lambda / semiclassical_leading(k, alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_on_parabola() {
        let (a, b) = golden_section(|x: f64| Ok((x - 0.3) * (x - 0.3)), 0.0, 1.0, 1e-8).unwrap();
        assert!(b - a <= 1e-8 && a <= 0.3 + 1e-8 && b >= 0.3 - 1e-8);
    }

    #[test]
    fn secant_on_cubic() {
        let (x, g, _) = secant_root(|x: f64| Ok(x * x * x - 0.125), 0.4, 0.6, 0.0, 1.0, 1e-14).unwrap();
        assert!((x - 0.5).abs() < 1e-12 && g.abs() <= 1e-14);
    }

    #[test]
    fn secant_falls_back_to_bisection() {
        // Flat tails push plain secant out of range.
        let g = |x: f64| Ok((10.0 * (x - 0.7)).tanh());
        let (x, _, _) = secant_root(g, 0.0, 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((x - 0.7).abs() < 1e-12);
    }

    #[test]
    fn sign_changes_skip_near_zeros() {
        assert_eq!(count_sign_changes([-1.0, -0.5, 0.0, 0.5, 1.0], 1e-10), 1);
        assert_eq!(count_sign_changes([-1.0, 1.0, -1.0], 0.0), 2);
        assert_eq!(count_sign_changes([1e-12, -1e-12], 1e-10), 0);
    }

    #[test]
    fn scan_rejects_small_sample() {
        assert!(uniqueness_scan(1, (0.0f64, 1.0), 10).is_err());
    }

    #[test]
    fn asymptote_precondition() {
        assert!(matches!(
            large_alpha_asymptote_check(1, 5.0f64),
            Err(SpectraError::Precondition(_))
        ));
    }
}
