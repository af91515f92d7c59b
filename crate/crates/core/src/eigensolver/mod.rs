//! Finite-difference eigensolver for `-u'' + V u = λ u`.
//!
//! The operator is truncated to a finite interval, discretized with the
//! three-point stencil and solved as a symmetric tridiagonal eigenproblem by
//! Sturm-sequence bisection. Every eigenvalue is computed on grids `h` and
//! `h/2` and Richardson-extrapolated, which removes the `O(h²)` stencil error.
//!
//! Boundary handling:
//! * whole line and far endpoints: homogeneous Dirichlet truncation;
//! * half-line Dirichlet: vertex grid starting at `t₁ = h`;
//! * half-line Neumann: cell-centered grid, first row `1/h² + V(t₁)` and
//!   last row `3/h² + V(t_n)`, which places the far Dirichlet end at `right`.

mod grid;
pub mod tridiag;

use serde::{Deserialize, Serialize};

pub use grid::{Grid, NodeLayout};

use crate::error::{Result, SpectraError};
use crate::operator::{Boundary, OperatorSpec, Potential};
use crate::scalar::Real;

/// Relative tolerance of the bisection.
pub const BISECTION_REL_TOL: f64 = 1e-12;
/// Added to the eigenvalue cap before truncating the domain.
pub const TRUNCATION_MARGIN: f64 = 25.0;
/// Relative padding of the truncated interval.
pub const TRUNCATION_PADDING: f64 = 0.2;
/// Minimum WKB decay exponent `∫ √(V - cap) dt` across the forbidden region
/// before the truncation point; `e^(-2·18)` is below double precision.
pub const DECAY_EXPONENT: f64 = 18.0;

const INVERSE_ITERATION_MAX: usize = 100;

/// Default grid spacing for exponent `k`.
pub fn default_spacing<T: Real>(k: u32) -> T {
    if k >= 20 {
        T::lit(5e-4)
    } else {
        T::lit(2e-3)
    }
}

/// Rigorous upper bound for `λ_m` from a Dirichlet box on `[-1, 1]`:
/// `(1/(k+1) + |α|)² + (mπ/2)²`.
pub fn eigenvalue_cap<T: Real>(k: u32, alpha: T, m: usize) -> T {
    let top = T::one() / T::of_usize(k as usize + 1) + alpha.abs();
    let box_mode = T::of_usize(m) * T::FRAC_PI_2();
    top * top + box_mode * box_mode
}

/// Smallest `s >= start` with `f(s) >= threshold`, for `f` nondecreasing on
/// `[start, ∞)` and unbounded.
fn extent_above<T: Real, F: Fn(T) -> T + ?Sized>(f: &F, start: T, threshold: T) -> T {
    if f(start) >= threshold {
        return start;
    }
    let mut lo = start;
    let mut step = T::lit(0.25);
    let mut hi = start + step;
    while f(hi) < threshold {
        lo = hi;
        step = step * T::two();
        hi = hi + step;
    }
    for _ in 0..200 {
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= T::lit(1e-12) * hi.abs().max(T::one()) {
            break;
        }
        if f(mid) >= threshold {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Point past which the WKB exponent `∫ √(V - cap)` measured from the
/// classical turning point reaches [`DECAY_EXPONENT`].
fn decay_extent<T: Real, F: Fn(T) -> T + ?Sized>(f: &F, start: T, cap: T) -> T {
    let turning = extent_above(f, start, cap);
    let step = T::lit(2e-3);
    let target = T::lit(DECAY_EXPONENT);
    let mut t = turning;
    let mut acc = T::zero();
    let mut prev = T::zero();
    while acc < target {
        let next = t + step;
        let cur = (f(next) - cap).max(T::zero()).sqrt();
        acc = acc + T::half() * (prev + cur) * step;
        prev = cur;
        t = next;
    }
    t
}

/// Half-width `L` beyond which the potential exceeds `cap + margin`, for the
/// right (`t > 0`) and left (`t < 0`) sides, over every `α` in the window.
fn truncation_extents<T: Real>(k: u32, alpha_lo: T, alpha_hi: T, cap: T, decay: bool) -> (T, T) {
    let threshold = cap + T::lit(TRUNCATION_MARGIN);
    let kp1 = T::of_usize(k as usize + 1);
    let profile = |s: T| crate::scalar::powi(s, k + 1) / kp1;
    let start = |alpha: T| {
        if alpha > T::zero() {
            crate::scalar::pow_pos(kp1 * alpha, kp1.recip())
        } else {
            T::zero()
        }
    };
    let extent = |f: &dyn Fn(T) -> T, s0: T| {
        let l = extent_above(f, s0, threshold);
        if decay {
            l.max(decay_extent(f, s0, cap))
        } else {
            l
        }
    };
    // Right side: g(s) - α is smallest for the largest α.
    let right = extent(
        &|s| {
            let d = profile(s) - alpha_hi;
            d * d
        },
        start(alpha_hi),
    );
    let left = if k % 2 == 1 {
        right
    } else {
        // V(-s) = (g(s) + α)²: the reflected problem has shift -α, worst at α_lo.
        extent(
            &|s| {
                let d = profile(s) + alpha_lo;
                d * d
            },
            start(-alpha_lo),
        )
    };
    (right, left)
}

/// Grid for `spec`, truncated where the potential exceeds `lambda_cap + 25`
/// and padded by 20%. Whole-line grids are symmetric about zero; half-line
/// grids start at zero.
pub fn choose_domain<T: Real>(spec: &OperatorSpec<T>, lambda_cap: T) -> Result<Grid<T>> {
    choose_domain_window(spec.k, spec.boundary, spec.alpha, spec.alpha, lambda_cap)
}

/// Like [`choose_domain`] but valid for every `α ∈ [alpha_lo, alpha_hi]`, so
/// that band functions can be sampled on one fixed grid.
pub fn choose_domain_window<T: Real>(
    k: u32,
    boundary: Boundary,
    alpha_lo: T,
    alpha_hi: T,
    lambda_cap: T,
) -> Result<Grid<T>> {
    window_grid(k, boundary, alpha_lo, alpha_hi, lambda_cap, false)
}

/// The grid the solvers use: [`choose_domain_window`], widened where needed
/// so that the WKB exponent `∫ √(V - cap)` from the turning point of
/// `lambda_cap` to the cut reaches [`DECAY_EXPONENT`]. The `cap + 25` rule
/// alone leaves the third eigenvalue with `~1e-8` truncation error for small
/// `k`; the decay rule pushes it below `1e-12`.
pub fn solver_domain_window<T: Real>(
    k: u32,
    boundary: Boundary,
    alpha_lo: T,
    alpha_hi: T,
    lambda_cap: T,
) -> Result<Grid<T>> {
    window_grid(k, boundary, alpha_lo, alpha_hi, lambda_cap, true)
}

/// [`solver_domain_window`] for a single operator.
pub fn solver_domain<T: Real>(spec: &OperatorSpec<T>, lambda_cap: T) -> Result<Grid<T>> {
    solver_domain_window(spec.k, spec.boundary, spec.alpha, spec.alpha, lambda_cap)
}

fn window_grid<T: Real>(
    k: u32,
    boundary: Boundary,
    alpha_lo: T,
    alpha_hi: T,
    lambda_cap: T,
    decay: bool,
) -> Result<Grid<T>> {
    if !(lambda_cap > T::zero()) {
        return Err(SpectraError::InvalidParameter(format!(
            "eigenvalue cap must be positive, got {lambda_cap}"
        )));
    }
    if alpha_lo > alpha_hi {
        return Err(SpectraError::InvalidParameter("empty alpha window".into()));
    }
    let pad = T::one() + T::lit(TRUNCATION_PADDING);
    let h = default_spacing::<T>(k);
    let (right, left) = truncation_extents(k, alpha_lo, alpha_hi, lambda_cap, decay);
    match boundary {
        Boundary::WholeLine => {
            let r = pad * right.max(left);
            Grid::with_spacing(-r, r, h, NodeLayout::Vertex)
        }
        Boundary::HalfLineNeumann => Grid::with_spacing(T::zero(), pad * right, h, NodeLayout::CellCentered),
        Boundary::HalfLineDirichlet => Grid::with_spacing(T::zero(), pad * right, h, NodeLayout::Vertex),
    }
}

/// Three-point discretization of `-d²/dt² + V` on a grid.
#[derive(Debug, Clone)]
pub struct DiscretizedProblem<T, P = OperatorSpec<T>> {
    pub potential: P,
    pub boundary: Boundary,
    pub grid: Grid<T>,
    pub diag: Vec<T>,
    pub offdiag: Vec<T>,
    /// Potential sampled at the grid points.
    pub values: Vec<T>,
}

/// Discretizes an operator of the family.
pub fn discretize<T: Real>(spec: &OperatorSpec<T>, grid: Grid<T>) -> Result<DiscretizedProblem<T>> {
    discretize_potential(*spec, grid)
}

/// Discretizes an arbitrary potential using its own boundary treatment.
pub fn discretize_potential<T: Real, P: Potential<T>>(potential: P, grid: Grid<T>) -> Result<DiscretizedProblem<T, P>> {
    let boundary = potential.boundary();
    let expected = match boundary {
        Boundary::HalfLineNeumann => NodeLayout::CellCentered,
        _ => NodeLayout::Vertex,
    };
    if grid.layout != expected {
        return Err(SpectraError::InvalidParameter(format!(
            "{boundary:?} requires a {expected:?} grid, got {:?}",
            grid.layout
        )));
    }
    if boundary.is_half_line() && grid.left != T::zero() {
        return Err(SpectraError::InvalidParameter("half-line grids must start at 0".into()));
    }
    let inv_h2 = (grid.h * grid.h).recip();
    let values: Vec<T> = grid.points().map(|t| potential.value(t)).collect();
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(SpectraError::InvalidParameter(format!("non-finite potential value {bad}")));
    }
    let mut diag: Vec<T> = values.iter().map(|&v| T::two() * inv_h2 + v).collect();
    if grid.layout == NodeLayout::CellCentered {
        // Mirror ghost at -h/2 gives u'(left) = 0; antisymmetric ghost at
        // right + h/2 gives u(right) = 0.
        diag[0] = inv_h2 + values[0];
        let last = grid.n - 1;
        diag[last] = T::lit(3.0) * inv_h2 + values[last];
    }
    let offdiag = vec![-inv_h2; grid.n - 1];
    Ok(DiscretizedProblem { potential, boundary, grid, diag, offdiag, values })
}

impl<T: Real, P: Potential<T> + Clone> DiscretizedProblem<T, P> {
    /// The same problem on the grid with half the spacing.
    pub fn refined(&self) -> Result<Self> {
        discretize_potential(self.potential.clone(), self.grid.refined())
    }
}

impl<T: Real, P> DiscretizedProblem<T, P> {
    fn offdiag_sq(&self) -> Vec<T> {
        self.offdiag.iter().map(|&e| e * e).collect()
    }

    /// The `m` smallest eigenvalues of the matrix itself (no extrapolation).
    pub fn matrix_eigenvalues(&self, m: usize) -> Result<Vec<T>> {
        let lower = self.values.iter().fold(T::infinity(), |a, &b| a.min(b)).min(T::zero());
        let hint = self.values.iter().fold(T::zero(), |a, &b| a.max(b)).min(T::lit(1e3));
        tridiag::smallest_eigenvalues(
            &self.diag,
            &self.offdiag_sq(),
            m,
            lower,
            hint.max(T::one()),
            T::lit(BISECTION_REL_TOL),
        )
    }

    /// `∫ u'² dt` for grid values `u`, using forward differences and the
    /// zero boundary values implied by the layout.
    pub fn kinetic_energy(&self, u: &[T]) -> T {
        let h = self.grid.h;
        let mut acc = T::zero();
        if self.boundary != Boundary::HalfLineNeumann {
            acc = acc + u[0] * u[0];
        }
        for w in u.windows(2) {
            let d = w[1] - w[0];
            acc = acc + d * d;
        }
        let last = u[u.len() - 1];
        let ghost = match self.grid.layout {
            NodeLayout::Vertex => T::one(),
            NodeLayout::CellCentered => T::two(),
        };
        acc = acc + ghost * last * last;
        acc / h
    }

    /// `∫ f(t) u(t)² dt` by the trapezoid rule (zero boundary values).
    pub fn weighted_mass(&self, u: &[T], f: impl Fn(T) -> T) -> T {
        let g = &self.grid;
        u.iter()
            .enumerate()
            .fold(T::zero(), |acc, (i, &x)| acc + f(g.point(i)) * x * x)
            * g.h
    }
}

/// Computed eigenvalues with their Richardson error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub error_estimate: T,
    pub grid_used: Grid<T>,
    pub coarse: Vec<T>,
    pub fine: Vec<T>,
}

/// Richardson extrapolant for a second-order quantity sampled at `h` and `h/2`.
#[inline]
pub fn richardson<T: Real>(coarse: T, fine: T) -> T {
    (T::lit(4.0) * fine - coarse) / T::lit(3.0)
}

/// The `m` lowest eigenvalues, extrapolated from grids `h` and `h/2`.
pub fn lowest_eigenvalues<T: Real, P: Potential<T> + Clone>(
    problem: &DiscretizedProblem<T, P>,
    m: usize,
) -> Result<Spectrum<T>> {
    if m == 0 || m > problem.grid.n {
        return Err(SpectraError::InvalidParameter(format!(
            "need 1 <= m <= n, got m = {m}, n = {}",
            problem.grid.n
        )));
    }
    let coarse = problem.matrix_eigenvalues(m)?;
    let fine = problem.refined()?.matrix_eigenvalues(m)?;
    let mut err = T::zero();
    let eigenvalues = coarse
        .iter()
        .zip(&fine)
        .map(|(&c, &f)| {
            err = err.max((f - c).abs() / T::lit(3.0));
            richardson(c, f)
        })
        .collect();
    Ok(Spectrum { eigenvalues, error_estimate: err, grid_used: problem.grid, coarse, fine })
}

/// Normalized ground state on the problem's grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenpair<T> {
    /// Rayleigh quotient of `u` (the matrix eigenvalue on this grid).
    pub lambda: T,
    pub u: Vec<T>,
    pub norm_weight: T,
}

/// Ground state by inverse iteration, normalized so that `Σ u_i² h = 1` and
/// `u > 0`.
pub fn ground_state<T: Real, P>(problem: &DiscretizedProblem<T, P>) -> Result<Eigenpair<T>> {
    let lambda1 = problem.matrix_eigenvalues(1)?[0];
    let mut offset = T::lit(1e-6) * lambda1.abs().max(T::one());
    let mut last_err = None;
    for _ in 0..4 {
        match tridiag::inverse_iteration(&problem.diag, &problem.offdiag, lambda1 - offset, INVERSE_ITERATION_MAX) {
            Ok(v) => {
                let h = problem.grid.h;
                let scale = h.sqrt().recip();
                let u: Vec<T> = v.into_iter().map(|x| x * scale).collect();
                let lambda = problem.kinetic_energy(&u)
                    + problem
                        .values
                        .iter()
                        .zip(&u)
                        .fold(T::zero(), |acc, (&vv, &x)| acc + vv * x * x)
                        * h;
                return Ok(Eigenpair { lambda, u, norm_weight: h });
            }
            Err(e) => {
                last_err = Some(e);
                offset = offset * T::lit(7.3);
            }
        }
    }
    Err(last_err.unwrap_or_else(|| SpectraError::NonConvergence("inverse iteration".into())))
}

/// Whole-line convenience: domain, discretization and `m` eigenvalues.
pub fn solve<T: Real>(spec: &OperatorSpec<T>, m: usize) -> Result<Spectrum<T>> {
    let cap = eigenvalue_cap(spec.k, spec.alpha, m);
    let grid = solver_domain(spec, cap)?;
    lowest_eigenvalues(&discretize(spec, grid)?, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::PotentialFn;
    use std::f64::consts::PI;

    #[test]
    fn domain_example_k1() {
        let spec = OperatorSpec::whole_line(1, 0.0f64).unwrap();
        let g = choose_domain(&spec, 10.0).unwrap();
        let l = (2.0 * 35.0f64.sqrt()).sqrt();
        assert!((l - 3.44).abs() < 0.01);
        assert!((g.right - 1.2 * l).abs() < 1e-9);
        assert!((g.right - 4.13).abs() < 0.01);
        assert_eq!(g.left, -g.right);
    }

    #[test]
    fn half_line_domain_starts_at_zero() {
        let spec = OperatorSpec::new(3, 0.0f64, Boundary::HalfLineNeumann).unwrap();
        let g = choose_domain(&spec, 10.0).unwrap();
        assert_eq!(g.left, 0.0);
        assert_eq!(g.layout, NodeLayout::CellCentered);
    }

    fn free(boundary: Boundary) -> PotentialFn<fn(f64) -> f64> {
        PotentialFn::new(|_| 0.0, boundary)
    }

    #[test]
    fn dirichlet_laplacian_on_unit_interval() {
        let g = Grid::with_spacing(0.0, 1.0, 1e-3, NodeLayout::Vertex).unwrap();
        let p = discretize_potential(free(Boundary::WholeLine), g).unwrap();
        let s = lowest_eigenvalues(&p, 3).unwrap();
        for j in 1..=3 {
            let exact = (j as f64 * PI).powi(2);
            assert!((s.eigenvalues[j - 1] - exact).abs() < 1e-6 * exact);
        }
    }

    #[test]
    fn neumann_dirichlet_interval() {
        let t_hat = 1.7;
        let g = Grid::with_spacing(0.0, t_hat, 1e-3, NodeLayout::CellCentered).unwrap();
        let p = discretize_potential(free(Boundary::HalfLineNeumann), g).unwrap();
        let s = lowest_eigenvalues(&p, 3).unwrap();
        for j in 1..=3 {
            let exact = ((2 * j - 1) as f64 * PI / (2.0 * t_hat)).powi(2);
            assert!((s.eigenvalues[j - 1] - exact).abs() < 1e-5 * exact, "{j}: {} vs {exact}", s.eigenvalues[j - 1]);
        }
    }

    #[test]
    fn shift_by_constant() {
        let spec = OperatorSpec::whole_line(2, 0.3f64).unwrap();
        let g = choose_domain(&spec, eigenvalue_cap(2, 0.3, 3)).unwrap();
        let base = lowest_eigenvalues(&discretize(&spec, g).unwrap(), 3).unwrap();
        let shifted = PotentialFn::new(move |t: f64| spec.potential(t) + 1.5, Boundary::WholeLine);
        let moved = lowest_eigenvalues(&discretize_potential(shifted, g).unwrap(), 3).unwrap();
        for (a, b) in base.eigenvalues.iter().zip(&moved.eigenvalues) {
            assert!((b - a - 1.5).abs() < 1e-9);
        }
    }

    #[test]
    fn ground_state_properties() {
        for k in [1u32, 3] {
            let spec = OperatorSpec::whole_line(k, 0.0f64).unwrap();
            let g = choose_domain(&spec, eigenvalue_cap(k, 0.0, 1)).unwrap();
            let p = discretize(&spec, g).unwrap();
            let gs = ground_state(&p).unwrap();
            let mass: f64 = gs.u.iter().map(|x| x * x).sum::<f64>() * gs.norm_weight;
            assert!((mass - 1.0).abs() < 1e-12);
            assert!(gs.u.iter().all(|&x| x > 0.0));
            let n = gs.u.len();
            for i in 0..n {
                assert!((gs.u[i] - gs.u[n - 1 - i]).abs() < 1e-8);
            }
            let lam = p.matrix_eigenvalues(1).unwrap()[0];
            assert!((gs.lambda - lam).abs() < 1e-9 * lam);
        }
    }

    #[test]
    fn mismatched_layout_rejected() {
        let spec = OperatorSpec::new(1, 0.0f64, Boundary::HalfLineNeumann).unwrap();
        let g = Grid::with_spacing(0.0, 3.0, 0.01, NodeLayout::Vertex).unwrap();
        assert!(discretize(&spec, g).is_err());
    }

    #[test]
    fn single_precision_harmonic_oscillator() {
        let p = PotentialFn::new(|t: f32| t * t, Boundary::WholeLine);
        let g = Grid::with_spacing(-6.0f32, 6.0, 0.02, NodeLayout::Vertex).unwrap();
        let s = lowest_eigenvalues(&discretize_potential(p, g).unwrap(), 2).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-2, "{:?}", s.eigenvalues);
        assert!((s.eigenvalues[1] - 3.0).abs() < 1e-2, "{:?}", s.eigenvalues);
    }
}
