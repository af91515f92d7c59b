//! Large-`k` model: a piecewise-constant potential below `Q^(k)(α)`, its
//! gluing condition, and the limiting eigenvalues `α² + (jπ/2)²`.
//!
//! For `ε ∈ (0, 1)` the comparison potential is
//!
//! ```text
//!   A          t ≤ t₀ = -1-ε
//!   α²(1-ε)    t₀ < t ≤ t₁ = 1-ε
//!   0          t₁ < t ≤ t₂ = 1+ε
//!   B          t > t₂
//! ```
//!
//! with `A, B = ((1+ε)^(k+1)/(k+1) ± α)²`. Eigenvalues below `min(A, B)`
//! solve a transcendental equation obtained by matching `u'/u` at the
//! breakpoints. Dropping the `O((k+1)(1+ε)^(-(k+1)))` terms leaves the
//! reduced equation `f₁(λ) = f₂(λ)`.

use serde::{Deserialize, Serialize};

use crate::eigensolver::{discretize_potential, lowest_eigenvalues, solve, Grid, NodeLayout, Spectrum, DECAY_EXPONENT};
use crate::error::{Result, SpectraError};
use crate::operator::{OperatorSpec, Potential};
use crate::scalar::Real;

/// Relative distance kept from the poles of `f₁` when bracketing.
pub const POLE_PADDING: f64 = 1e-9;
/// Target spacing for discretizing the piecewise potential.
pub const PIECEWISE_SPACING: f64 = 2e-3;

/// `α² + (jπ/2)²`, the `j`-th eigenvalue of `-d²/dt² + α²` on `(-1, 1)`
/// with Dirichlet ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitEigenvalue<T> {
    pub j: u32,
    pub alpha: T,
    pub value: T,
}

pub fn limit_eigenvalue<T: Real>(j: u32, alpha: T) -> Result<LimitEigenvalue<T>> {
    if j == 0 {
        return Err(SpectraError::InvalidParameter("j must be at least 1".into()));
    }
    let x = T::of_usize(j as usize) * T::FRAC_PI_2();
    Ok(LimitEigenvalue { j, alpha, value: alpha * alpha + x * x })
}

/// `|λ_j(Q^(k)(α)) - (α² + (jπ/2)²)|`.
pub fn limit_gap<T: Real>(k: u32, alpha: T, j: u32) -> Result<T> {
    let target = limit_eigenvalue(j, alpha)?.value;
    let s = solve(&OperatorSpec::whole_line(k, alpha)?, j as usize)?;
    Ok((s.eigenvalues[j as usize - 1] - target).abs())
}

/// Parameters of the piecewise comparison potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlueSystem<T> {
    pub k: u32,
    pub alpha: T,
    pub eps: T,
    /// `((1+ε)^(k+1)/(k+1) + α)²`; may be `+∞` for huge `k`.
    pub a: T,
    /// `((1+ε)^(k+1)/(k+1) - α)²`.
    pub b: T,
    pub t0: T,
    pub t1: T,
    pub t2: T,
}

impl<T: Real> GlueSystem<T> {
    pub fn new(k: u32, alpha: T, eps: T) -> Result<Self> {
        if k == 0 {
            return Err(SpectraError::InvalidParameter("k must be at least 1".into()));
        }
        if !(alpha >= T::zero() && alpha.is_finite()) {
            return Err(SpectraError::InvalidParameter(format!("alpha must be finite and >= 0, got {alpha}")));
        }
        if !(eps > T::zero() && eps < T::one()) {
            return Err(SpectraError::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
        }
        let kp1 = T::of_usize(k as usize + 1);
        let height = (kp1 * eps.ln_1p() - kp1.ln()).exp();
        let (a, b) = (height + alpha, height - alpha);
        Ok(Self {
            k,
            alpha,
            eps,
            a: a * a,
            b: b * b,
            t0: -T::one() - eps,
            t1: T::one() - eps,
            t2: T::one() + eps,
        })
    }

    /// Height of the middle plateau, `α²(1-ε)`.
    pub fn plateau(&self) -> T {
        self.alpha * self.alpha * (T::one() - self.eps)
    }

    /// Size of the neglected terms, `(k+1)(1+ε)^(-(k+1))`.
    pub fn correction_scale(&self) -> T {
        let kp1 = T::of_usize(self.k as usize + 1);
        (kp1.ln() - kp1 * self.eps.ln_1p()).exp()
    }

    fn check_lambda(&self, lambda: T) -> Result<()> {
        if !(lambda > T::zero()) {
            return Err(SpectraError::Precondition(format!("lambda = {lambda} must be positive")));
        }
        if !(lambda < self.a && lambda < self.b) {
            return Err(SpectraError::Precondition(format!(
                "lambda = {lambda} not below both outer levels A = {}, B = {}",
                self.a, self.b
            )));
        }
        Ok(())
    }

    /// `1/√(level - λ)`, zero for an infinite level.
    fn inv_decay(level: T, lambda: T) -> T {
        if level.is_infinite() {
            T::zero()
        } else {
            (level - lambda).sqrt().recip()
        }
    }
}

/// `(cos(√q L), sin(√q L)/√q)` with the hyperbolic continuation for `q < 0`
/// and the limit `(1, L)` at `q = 0`.
fn propagator<T: Real>(q: T, len: T) -> (T, T) {
    if q > T::zero() {
        let s = q.sqrt();
        ((s * len).cos(), (s * len).sin() / s)
    } else if q < T::zero() {
        let s = (-q).sqrt();
        ((s * len).cosh(), (s * len).sinh() / s)
    } else {
        (T::one(), len)
    }
}

/// `f₁(λ)`: `tan(2C)/C` with `C = √(λ - α²(1-ε))`, `tanh` below the plateau
/// and `2` on it.
pub fn f1<T: Real>(lambda: T, alpha: T, eps: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(SpectraError::Precondition(format!("lambda = {lambda} must be positive")));
    }
    let q = lambda - alpha * alpha * (T::one() - eps);
    let (c, s) = propagator(q, T::two());
    if is_pole(c, s * q.abs().sqrt()) {
        return Err(SpectraError::Pole(format!("tan pole of f1 at lambda = {lambda}")));
    }
    Ok(s / c)
}

/// `f₂(λ) = -tan(2ε√λ)/√λ`.
pub fn f2<T: Real>(lambda: T, eps: T) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(SpectraError::Precondition(format!("lambda = {lambda} must be positive")));
    }
    let (c, s) = propagator(lambda, T::two() * eps);
    if is_pole(c, s * lambda.sqrt()) {
        return Err(SpectraError::Pole(format!("tan pole of f2 at lambda = {lambda}")));
    }
    Ok(-s / c)
}

/// A denominator `den` counts as zero when it is at rounding level compared
/// with the companion term `scale`.
fn is_pole<T: Real>(den: T, scale: T) -> bool {
    den.abs() <= T::lit(4.0) * T::epsilon() * scale.abs().max(T::one())
}

/// `u/u'` at `t₁` for the solution decaying to the left, written so that
/// an infinite `A` and the plateau crossing need no special case.
fn left_ratio<T: Real>(sys: &GlueSystem<T>, lambda: T) -> Result<T> {
    let r = GlueSystem::inv_decay(sys.a, lambda);
    let q = lambda - sys.plateau();
    let (c, s) = propagator(q, sys.t1 - sys.t0);
    let den = c - q * r * s;
    if is_pole(den, q * r * s) {
        return Err(SpectraError::Pole(format!("left factor singular at lambda = {lambda}")));
    }
    Ok((s + r * c) / den)
}

/// `u/u'` at `t₁` for the solution decaying to the right.
fn right_ratio<T: Real>(sys: &GlueSystem<T>, lambda: T) -> Result<T> {
    let r = GlueSystem::inv_decay(sys.b, lambda);
    let (c, s) = propagator(lambda, sys.t2 - sys.t1);
    let den = c - lambda * r * s;
    if is_pole(den, lambda * r * s) {
        return Err(SpectraError::Pole(format!("right factor singular at lambda = {lambda}")));
    }
    Ok(-(s + r * c) / den)
}

/// Left minus right side of the gluing condition:
///
/// ```text
///  (1/C)(√(A-λ) tan(2C) + C)/(√(A-λ) - C tan(2C))
///    + (1/√λ)(√(B-λ) tan(2ε√λ) + √λ)/(√(B-λ) - √λ tan(2ε√λ))
/// ```
///
/// with `C = √(λ - α²(1-ε))` (hyperbolic below the plateau). Errors:
/// [`SpectraError::Precondition`] when `λ ∉ (0, min(A, B))`,
/// [`SpectraError::Pole`] at a singular factor.
pub fn glue_residual<T: Real>(lambda: T, sys: &GlueSystem<T>) -> Result<T> {
    sys.check_lambda(lambda)?;
    Ok(left_ratio(sys, lambda)? - right_ratio(sys, lambda)?)
}

/// Pole-free form of the gluing condition: the left-decaying solution is
/// carried to `t₂` and tested against the right decay condition. Vanishes
/// exactly at the eigenvalues of the piecewise potential.
pub fn glue_determinant<T: Real>(lambda: T, sys: &GlueSystem<T>) -> Result<T> {
    sys.check_lambda(lambda)?;
    let ra = GlueSystem::inv_decay(sys.a, lambda);
    let rb = GlueSystem::inv_decay(sys.b, lambda);
    // (u, u') ∝ (1, √(A-λ)) at t₀.
    let (mut u, mut du) = (ra, T::one());
    for (q, len) in [(lambda - sys.plateau(), sys.t1 - sys.t0), (lambda, sys.t2 - sys.t1)] {
        let (c, s) = propagator(q, len);
        (u, du) = (c * u + s * du, -q * s * u + c * du);
    }
    Ok(u + rb * du)
}

/// The lowest `count` roots of [`glue_determinant`] below `min(A, B, cap)`,
/// located by a sign scan with `samples` points and bisection.
pub fn glue_roots<T: Real>(sys: &GlueSystem<T>, count: usize, cap: T, samples: usize) -> Result<Vec<T>> {
    let top = cap.min(sys.a).min(sys.b);
    if !(top > T::zero()) {
        return Ok(Vec::new());
    }
    let top = top * (T::one() - T::lit(POLE_PADDING));
    let step = top / T::of_usize(samples.max(2));
    let mut roots = Vec::new();
    let mut a = step * T::lit(1e-3);
    let mut fa = glue_determinant(a, sys)?;
    let mut i = 1;
    while roots.len() < count && i <= samples {
        let b = (step * T::of_usize(i)).min(top);
        let fb = glue_determinant(b, sys)?;
        if fa == T::zero() {
            roots.push(a);
        } else if (fa < T::zero()) != (fb < T::zero()) {
            roots.push(bisect(|x| glue_determinant(x, sys), a, b, fa)?);
        }
        a = b;
        fa = fb;
        i += 1;
    }
    Ok(roots)
}

fn bisect<T: Real>(f: impl Fn(T) -> Result<T>, mut a: T, mut b: T, fa: T) -> Result<T> {
    let neg_left = fa < T::zero();
    for _ in 0..200 {
        let mid = T::half() * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (f(mid)? < T::zero()) == neg_left {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(T::half() * (a + b))
}

/// The `j`-th root of `f₁ = f₂`, bisected inside the `j`-th monotone branch
/// `(((j-½)π/2)² + α²(1-ε), ((j+½)π/2)² + α²(1-ε))` of `f₁`.
///
/// `k ≥ 1` only labels the model; the neglected terms are of size
/// [`GlueSystem::correction_scale`].
pub fn solve_reduced<T: Real>(j: u32, alpha: T, eps: T, k: u32) -> Result<T> {
    if j == 0 || k == 0 {
        return Err(SpectraError::InvalidParameter("j and k must be at least 1".into()));
    }
    if !(eps > T::zero() && eps < T::one()) {
        return Err(SpectraError::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let plateau = alpha * alpha * (T::one() - eps);
    let jt = T::of_usize(j as usize);
    let edge = |x: T| {
        let v = x * T::FRAC_PI_2();
        v * v + plateau
    };
    let (lo, hi) = (edge(jt - T::half()), edge(jt + T::half()));
    let f2_pole = {
        let v = T::PI() / (T::lit(4.0) * eps);
        v * v
    };
    if !(f2_pole > hi) {
        return Err(SpectraError::Precondition(format!(
            "eps = {eps} too large: f2 has a pole at {f2_pole} below {hi}"
        )));
    }
    let pad = T::lit(POLE_PADDING);
    let (a, b) = (lo * (T::one() + pad), hi * (T::one() - pad));
    let g = |x: T| -> Result<T> { Ok(f1(x, alpha, eps)? - f2(x, eps)?) };
    let (ga, gb) = (g(a)?, g(b)?);
    if !(ga < T::zero() && gb > T::zero()) {
        return Err(SpectraError::Bracket(format!("no sign change of f1 - f2 on ({a}, {b})")));
    }
    bisect(g, a, b, ga)
}

/// The comparison potential as a [`Potential`]. At a breakpoint the value is
/// the mean of the two sides, which keeps the three-point scheme second
/// order when breakpoints sit on grid nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PiecewisePotential<T> {
    pub sys: GlueSystem<T>,
}

impl<T: Real> PiecewisePotential<T> {
    pub fn new(sys: GlueSystem<T>) -> Self {
        Self { sys }
    }

    fn levels(&self) -> [T; 4] {
        [self.sys.a, self.sys.plateau(), T::zero(), self.sys.b]
    }

    fn breakpoints(&self) -> [T; 3] {
        [self.sys.t0, self.sys.t1, self.sys.t2]
    }
}

impl<T: Real> Potential<T> for PiecewisePotential<T> {
    fn value(&self, t: T) -> T {
        let levels = self.levels();
        let tol = T::lit(1e-9);
        for (i, &p) in self.breakpoints().iter().enumerate() {
            if (t - p).abs() <= tol {
                return T::half() * (levels[i] + levels[i + 1]);
            }
            if t < p {
                return levels[i];
            }
        }
        levels[3]
    }
}

/// Eigenvalues of the comparison potential from the finite-difference
/// solver, on a grid with every breakpoint on a node. Requires `A`, `B` finite
/// and `ε` a multiple of `PIECEWISE_SPACING / 2`.
pub fn piecewise_eigenvalues<T: Real>(sys: &GlueSystem<T>, m: usize, cap: T) -> Result<Spectrum<T>> {
    if !(sys.a.is_finite() && sys.b.is_finite()) {
        return Err(SpectraError::InvalidParameter("outer levels must be finite".into()));
    }
    let target = T::lit(PIECEWISE_SPACING);
    let n_mid = (T::two() * sys.eps / target).round().max(T::one());
    let h = T::two() * sys.eps / n_mid;
    let n_wide = T::two() / h;
    if (n_wide - n_wide.round()).abs() > T::lit(1e-6) {
        return Err(SpectraError::InvalidParameter(format!(
            "breakpoints of eps = {} do not fit a uniform grid near h = {target}",
            sys.eps
        )));
    }
    // Decay length past each outer breakpoint; a level below the cap cannot
    // confine, so a fixed wide margin is used and the result is a box mode.
    let decay = |level: T| {
        let gap = level - cap;
        if gap > T::one() {
            T::lit(DECAY_EXPONENT) / gap.sqrt() * (T::one() + T::lit(0.2))
        } else {
            T::lit(10.0)
        }
    };
    let n_left = (decay(sys.a) / h).ceil();
    let n_right = (decay(sys.b) / h).ceil();
    let left = sys.t0 - n_left * h;
    let right = sys.t2 + n_right * h;
    let intervals = n_left + n_wide.round() + n_mid + n_right;
    let n = intervals.to_usize().ok_or_else(|| SpectraError::InvalidParameter("grid too large".into()))? - 1;
    let grid = Grid::new(left, right, n, NodeLayout::Vertex)?;
    lowest_eigenvalues(&discretize_potential(PiecewisePotential::new(*sys), grid)?, m)
}

/// Smallest even `k ≤ k_max` for which `Q^(k)(α)`'s potential dominates the
/// comparison potential at `n_samples` points of `[-3, 3]`.
pub fn min_dominating_k<T: Real>(alpha: T, eps: T, k_max: u32, n_samples: usize) -> Result<Option<u32>> {
    for k in (2..=k_max).step_by(2) {
        let sys = GlueSystem::new(k, alpha, eps)?;
        let p = PiecewisePotential::new(sys);
        let spec = OperatorSpec::whole_line(k, alpha)?;
        let span = T::lit(6.0);
        let ok = (0..n_samples).all(|i| {
            let t = T::lit(-3.0) + span * T::of_usize(i) / T::of_usize(n_samples - 1);
            spec.potential(t) >= p.value(t)
        });
        if ok {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn limit_eigenvalue_examples() {
        assert!((limit_eigenvalue(1, 0.0f64).unwrap().value - PI * PI / 4.0).abs() < 1e-15);
        assert!((limit_eigenvalue(2, 1.0f64).unwrap().value - (1.0 + PI * PI)).abs() < 1e-14);
        assert!(limit_eigenvalue(0, 1.0f64).is_err());
    }

    #[test]
    fn f1_seam_and_pole() {
        let (alpha, eps) = (0.8f64, 0.1);
        let seam = alpha * alpha * (1.0 - eps);
        assert_eq!(f1(seam, alpha, eps).unwrap(), 2.0);
        for d in [1e-10, -1e-10] {
            assert!((f1(seam + d, alpha, eps).unwrap() - 2.0).abs() < 1e-4);
        }
        assert!(matches!(f1(PI * PI / 16.0, 0.0, 0.3), Err(SpectraError::Pole(_))));
    }

    #[test]
    fn f2_examples() {
        let eps = 0.05f64;
        assert!((f2(1e-12, eps).unwrap() + 2.0 * eps).abs() < 1e-9);
        let top = (PI / (4.0 * eps)).powi(2);
        for i in 1..200 {
            assert!(f2(top * i as f64 / 200.0, eps).unwrap() < 0.0);
        }
        // At ε = 0 the function vanishes identically.
        assert_eq!(f2(3.0f64, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn reduced_root_at_alpha_zero_is_explicit() {
        for eps in [0.1f64, 0.05, 0.01] {
            let r = solve_reduced(1, 0.0, eps, 100).unwrap();
            let exact = PI * PI / (4.0 * (1.0 + eps).powi(2));
            assert!((r - exact).abs() < 1e-10, "{r} vs {exact}");
        }
    }

    #[test]
    fn reduced_roots_increase_in_j() {
        let r: Vec<f64> = (1..=3).map(|j| solve_reduced(j, 0.5, 0.05, 100).unwrap()).collect();
        assert!(r[0] < r[1] && r[1] < r[2]);
    }

    #[test]
    fn reduced_precondition() {
        assert!(matches!(solve_reduced(3, 1.0f64, 0.4, 10), Err(SpectraError::Precondition(_))));
    }

    #[test]
    fn residual_preconditions() {
        let sys = GlueSystem::new(30, 0.5f64, 0.1).unwrap();
        assert!(matches!(glue_residual(2.0, &sys), Err(SpectraError::Precondition(_))));
        assert!(matches!(glue_residual(-1.0, &sys), Err(SpectraError::Precondition(_))));
    }

    #[test]
    fn determinant_and_residual_share_roots() {
        let sys = GlueSystem::new(60, 0.5f64, 0.1).unwrap();
        let roots = glue_roots(&sys, 3, 20.0, 4000).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            // The residual changes sign across each root.
            let lo = glue_residual(r * (1.0 - 1e-7), &sys).unwrap();
            let hi = glue_residual(r * (1.0 + 1e-7), &sys).unwrap();
            assert!(lo * hi < 0.0, "{r}: {lo} {hi}");
        }
    }

    #[test]
    fn huge_k_uses_infinite_walls() {
        let sys = GlueSystem::new(1_000_000, 0.0f64, 0.01).unwrap();
        assert!(sys.a.is_infinite());
        let roots = glue_roots(&sys, 1, 5.0, 2000).unwrap();
        let exact = PI * PI / (4.0 * 1.01f64.powi(2));
        assert!((roots[0] - exact).abs() < 1e-12);
    }

    #[test]
    fn piecewise_value_at_breakpoints() {
        let sys = GlueSystem::new(60, 0.5f64, 0.1).unwrap();
        let p = PiecewisePotential::new(sys);
        assert_eq!(p.value(1.0), 0.0);
        assert_eq!(p.value(0.9), 0.5 * sys.plateau());
        assert_eq!(p.value(-5.0), sys.a);
        assert_eq!(p.value(5.0), sys.b);
    }
}
