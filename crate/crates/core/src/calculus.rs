//! Band-function calculus for `α ↦ λ₁(α)`.
//!
//! The ground state is computed on grids `h` and `h/2`; every quadrature
//! built from it (moment, kinetic and potential parts) is Richardson
//! extrapolated the same way as the eigenvalues. On a fixed grid the discrete
//! Hellmann–Feynman formula is exact for the matrix eigenvalue, so the
//! derivative agrees with finite differences of `λ₁` up to the
//! extrapolation error.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{
    discretize, eigenvalue_cap, ground_state, richardson, solver_domain_window, DiscretizedProblem, Grid,
};
use crate::error::{Result, SpectraError};
use crate::operator::{Boundary, OperatorSpec};
use crate::scalar::Real;

/// `|∂_αλ₁|` below which a point counts as critical.
pub const CRITICAL_TOL: f64 = 1e-6;
/// Default step of [`second_derivative_fd`].
pub const DEFAULT_FD_STEP: f64 = 1e-3;

/// Ground-state data of `Q(α)` together with the next two eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPoint<T> {
    pub k: u32,
    pub alpha: T,
    pub lambda1: T,
    pub lambda2: T,
    pub lambda3: T,
    /// `∂_αλ₁ = 2(α - moment)`.
    pub d_lambda1: T,
    /// `‖(t^(k+1)/(k+1) - α) u‖²`.
    pub potential_norm_sq: T,
    /// `‖u'‖²`.
    pub kinetic_norm_sq: T,
    /// `∫ t^(k+1)/(k+1) u² dt`.
    pub moment: T,
}

impl<T: Real> BandPoint<T> {
    /// `kinetic / potential`; equals `k+1` at critical points.
    pub fn kinetic_ratio(&self) -> T {
        self.kinetic_norm_sq / self.potential_norm_sq
    }

    /// `λ₁ - (kinetic + potential)`.
    pub fn energy_defect(&self) -> T {
        self.lambda1 - (self.kinetic_norm_sq + self.potential_norm_sq)
    }

    pub fn is_critical(&self) -> bool {
        self.d_lambda1.abs() <= T::lit(CRITICAL_TOL)
    }
}

/// Per-grid quantities before extrapolation.
#[derive(Debug, Clone, Copy)]
struct RawPoint<T> {
    lambda: [T; 3],
    potential: T,
    kinetic: T,
    moment: T,
}

fn raw_point<T: Real>(problem: &DiscretizedProblem<T>, eigen: bool) -> Result<RawPoint<T>> {
    let gs = ground_state(problem)?;
    let spec = problem.potential;
    let h = problem.grid.h;
    let mut potential = T::zero();
    let mut moment = T::zero();
    for (i, &u) in gs.u.iter().enumerate() {
        let w = u * u;
        potential = potential + problem.values[i] * w;
        moment = moment + spec.profile(problem.grid.point(i)) * w;
    }
    let mut lambda = [gs.lambda; 3];
    if eigen {
        let ev = problem.matrix_eigenvalues(3)?;
        lambda[1] = ev[1];
        lambda[2] = ev[2];
    }
    Ok(RawPoint { lambda, potential: potential * h, kinetic: problem.kinetic_energy(&gs.u), moment: moment * h })
}

/// Evaluates band points of one `k` on a grid fixed for a whole `α` window.
///
/// Keeping the grid fixed makes `λ₁` a smooth function of `α` at the discrete
/// level, which finite differences and secant steps rely on.
#[derive(Debug, Clone)]
pub struct BandSolver<T> {
    k: u32,
    window: (T, T),
    coarse: Grid<T>,
    fine: Grid<T>,
}

impl<T: Real> BandSolver<T> {
    pub fn new(k: u32, alpha_lo: T, alpha_hi: T) -> Result<Self> {
        if k == 0 {
            return Err(SpectraError::InvalidParameter("k must be at least 1".into()));
        }
        if !(alpha_lo.is_finite() && alpha_hi.is_finite()) {
            return Err(SpectraError::InvalidParameter("alpha window must be finite".into()));
        }
        let cap = eigenvalue_cap(k, alpha_lo.abs().max(alpha_hi.abs()), 3);
        let coarse = solver_domain_window(k, Boundary::WholeLine, alpha_lo, alpha_hi, cap)?;
        let fine = coarse.refined();
        Ok(Self { k, window: (alpha_lo, alpha_hi), coarse, fine })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn window(&self) -> (T, T) {
        self.window
    }

    pub fn grid(&self) -> Grid<T> {
        self.coarse
    }

    fn spec(&self, alpha: T) -> Result<OperatorSpec<T>> {
        OperatorSpec::whole_line(self.k, alpha)
    }

    /// Full band point: `λ₁..λ₃`, derivative and energy split.
    pub fn point(&self, alpha: T) -> Result<BandPoint<T>> {
        self.evaluate(alpha, true)
    }

    /// Ground-state part only (`λ₂ = λ₃ = NaN`); cheaper for scans.
    pub fn ground(&self, alpha: T) -> Result<BandPoint<T>> {
        self.evaluate(alpha, false)
    }

    fn evaluate(&self, alpha: T, eigen: bool) -> Result<BandPoint<T>> {
        let spec = self.spec(alpha)?;
        let c = raw_point(&discretize(&spec, self.coarse)?, eigen)?;
        let f = raw_point(&discretize(&spec, self.fine)?, eigen)?;
        let moment = richardson(c.moment, f.moment);
        let upper = |j: usize| if eigen { richardson(c.lambda[j], f.lambda[j]) } else { T::nan() };
        Ok(BandPoint {
            k: self.k,
            alpha,
            lambda1: richardson(c.lambda[0], f.lambda[0]),
            lambda2: upper(1),
            lambda3: upper(2),
            d_lambda1: T::two() * (alpha - moment),
            potential_norm_sq: richardson(c.potential, f.potential),
            kinetic_norm_sq: richardson(c.kinetic, f.kinetic),
            moment,
        })
    }

    /// Extrapolated `λ₁(α)`.
    pub fn lambda1(&self, alpha: T) -> Result<T> {
        let spec = self.spec(alpha)?;
        let c = ground_state(&discretize(&spec, self.coarse)?)?.lambda;
        let f = ground_state(&discretize(&spec, self.fine)?)?.lambda;
        Ok(richardson(c, f))
    }

    /// Extrapolated `∂_αλ₁(α)`.
    pub fn derivative(&self, alpha: T) -> Result<T> {
        Ok(self.ground(alpha)?.d_lambda1)
    }

    /// Ground-state band points for many `α`, evaluated in parallel; the
    /// output order follows `alphas`.
    pub fn ground_batch(&self, alphas: &[T]) -> Result<Vec<BandPoint<T>>> {
        alphas.par_iter().map(|&a| self.ground(a)).collect()
    }

    /// Centered second difference of `λ₁` on this solver's grid.
    pub fn second_derivative(&self, alpha: T, step: T) -> Result<T> {
        let [lo, mid, hi] = [alpha - step, alpha, alpha + step];
        let vals: Vec<T> = [lo, mid, hi].par_iter().map(|&a| self.lambda1(a)).collect::<Result<_>>()?;
        Ok(central_second_difference(|i| vals[i], step))
    }
}

/// `(f(x-s) - 2f(x) + f(x+s)) / s²` with `f` given at indices 0, 1, 2.
pub fn central_second_difference<T: Real>(f: impl Fn(usize) -> T, step: T) -> T {
    (f(0) - T::two() * f(1) + f(2)) / (step * step)
}

/// Band point of `Q^(k)(α)` on a grid chosen for `α` alone.
pub fn band_point<T: Real>(k: u32, alpha: T) -> Result<BandPoint<T>> {
    BandSolver::new(k, alpha, alpha)?.point(alpha)
}

fn require_critical<T: Real>(p: &BandPoint<T>) -> Result<()> {
    if p.is_critical() {
        Ok(())
    } else {
        Err(SpectraError::Precondition(format!(
            "alpha = {} is not critical for k = {}: d_lambda1 = {:e}",
            p.alpha,
            p.k,
            p.d_lambda1.to_f64_lossy()
        )))
    }
}

/// `‖(g - α_c)u‖² - λ₁/(k+2)` at a critical point `α_c`.
pub fn virial_check<T: Real>(k: u32, alpha_c: T) -> Result<T> {
    let p = band_point(k, alpha_c)?;
    require_critical(&p)?;
    Ok(p.potential_norm_sq - p.lambda1 / T::of_usize(k as usize + 2))
}

/// `(λ₁(α+s) - 2λ₁(α) + λ₁(α-s)) / s²`, all three on one grid.
pub fn second_derivative_fd<T: Real>(k: u32, alpha: T, step: T) -> Result<T> {
    if !(step > T::zero()) {
        return Err(SpectraError::InvalidParameter(format!("step must be positive, got {step}")));
    }
    BandSolver::new(k, alpha - step, alpha + step)?.second_derivative(alpha, step)
}

/// Which spectral gap certifies the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `(k+2)λ₂ > (k+6)λ₁`.
    A,
    /// `(k+2)λ₃ > (k+6)λ₁`; available for odd `k` or `α_c = 0`.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NondegeneracyCertificate<T> {
    pub k: u32,
    pub alpha_c: T,
    pub branch: Branch,
    /// `(k+2)λ_m - (k+6)λ₁` for the selected branch.
    pub gap_value: T,
    /// `2·gap / ((k+2)(λ_m - λ₁))`.
    pub second_derivative_lower: T,
    pub second_derivative_fd: T,
    pub branch_a_gap: T,
    pub branch_b_gap: Option<T>,
}

impl<T: Real> NondegeneracyCertificate<T> {
    pub fn certified(&self) -> bool {
        self.gap_value > T::zero()
    }
}

/// `(k+2)λ_m - (k+6)λ₁`.
pub fn gap<T: Real>(k: u32, lambda1: T, lambda_m: T) -> T {
    T::of_usize(k as usize + 2) * lambda_m - T::of_usize(k as usize + 6) * lambda1
}

/// Lower bound for `∂²_αλ₁` implied by a positive gap.
pub fn second_derivative_lower<T: Real>(k: u32, lambda1: T, lambda_m: T) -> T {
    T::two() * gap(k, lambda1, lambda_m) / (T::of_usize(k as usize + 2) * (lambda_m - lambda1))
}

/// Both gap conditions at `α_c`, with the direct second difference.
///
/// Odd `k` reports branch B. Even `k` reports branch A, or B at `α_c = 0`
/// when A fails.
pub fn nondegeneracy_certificate<T: Real>(k: u32, alpha_c: T) -> Result<NondegeneracyCertificate<T>> {
    let step = T::lit(DEFAULT_FD_STEP);
    let solver = BandSolver::new(k, alpha_c - step, alpha_c + step)?;
    let p = solver.point(alpha_c)?;
    let fd = solver.second_derivative(alpha_c, step)?;
    Ok(certificate_from(&p, fd))
}

pub(crate) fn certificate_from<T: Real>(p: &BandPoint<T>, fd: T) -> NondegeneracyCertificate<T> {
    let k = p.k;
    let a = gap(k, p.lambda1, p.lambda2);
    let b_eligible = k % 2 == 1 || p.alpha == T::zero();
    let b = b_eligible.then(|| gap(k, p.lambda1, p.lambda3));
    let use_b = match b {
        Some(bg) => k % 2 == 1 || (a <= T::zero() && bg > T::zero()),
        None => false,
    };
    let (branch, lambda_m) = if use_b { (Branch::B, p.lambda3) } else { (Branch::A, p.lambda2) };
    NondegeneracyCertificate {
        k,
        alpha_c: p.alpha,
        branch,
        gap_value: gap(k, p.lambda1, lambda_m),
        second_derivative_lower: second_derivative_lower(k, p.lambda1, lambda_m),
        second_derivative_fd: fd,
        branch_a_gap: a,
        branch_b_gap: b,
    }
}

/// `α_c² < λ₁(α_c)` at a critical point of odd `k`.
pub fn abound_check<T: Real>(k: u32, alpha_c: T) -> Result<bool> {
    if k.is_multiple_of(2) {
        return Err(SpectraError::Precondition(format!("k = {k} must be odd")));
    }
    let p = BandSolver::new(k, alpha_c, alpha_c)?.ground(alpha_c)?;
    require_critical(&p)?;
    Ok(alpha_c * alpha_c < p.lambda1)
}
