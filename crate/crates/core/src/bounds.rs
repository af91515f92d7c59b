//! Closed-form constants and bound functions for the band minimum.
//!
//! Fractional powers of large products such as `(k+1)(2k+3)(2k+4)(2k+5)` are
//! taken through the log domain so nothing overflows for large `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::scalar::{pow_pos, powi, Real};

fn kf<T: Real>(k: u32) -> T {
    T::of_usize(k as usize)
}

fn pi2<T: Real>() -> T {
    T::PI() * T::PI()
}

fn pi4<T: Real>() -> T {
    pi2::<T>() * pi2::<T>()
}

/// `¼(k+1)(2k+3)(2k+4)(2k+5)`, returned as its logarithm.
fn ln_trial_product<T: Real>(k: u32) -> T {
    let k = kf::<T>(k);
    let two = T::two();
    (k + T::one()).ln() + (two * k + T::lit(3.0)).ln() + (two * k + T::lit(4.0)).ln() + (two * k + T::lit(5.0)).ln()
        - T::lit(4.0).ln()
}

fn require_k(k: u32, min: u32, parity: Option<u32>) -> Result<()> {
    if k < min {
        return Err(SpectraError::InvalidParameter(format!("k = {k} must be at least {min}")));
    }
    if let Some(p) = parity {
        if k % 2 != p {
            let want = if p == 0 { "even" } else { "odd" };
            return Err(SpectraError::InvalidParameter(format!("k = {k} must be {want}")));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson<T: Real>(f: &impl Fn(T) -> T, a: T, b: T, fa: T, fm: T, fb: T, whole: T, tol: T, depth: u32) -> T {
    let m = T::half() * (a + b);
    let lm = T::half() * (a + m);
    let rm = T::half() * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let six = T::lit(6.0);
    let left = (m - a) * (fa + T::lit(4.0) * flm + fm) / six;
    let right = (b - m) * (fm + T::lit(4.0) * frm + fb) / six;
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= T::lit(15.0) * tol {
        return left + right + delta / T::lit(15.0);
    }
    let half_tol = T::half() * tol;
    adaptive_simpson(f, a, m, fa, flm, fm, left, half_tol, depth - 1)
        + adaptive_simpson(f, m, b, fm, frm, fb, right, half_tol, depth - 1)
}

/// `∫_a^b f` by adaptive Simpson with absolute tolerance `tol`.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> T {
    let fa = f(a);
    let fb = f(b);
    let m = T::half() * (a + b);
    let fm = f(m);
    let whole = (b - a) * (fa + T::lit(4.0) * fm + fb) / T::lit(6.0);
    adaptive_simpson(&f, a, b, fa, fm, fb, whole, tol, 48)
}

/// `I(m) = ∫₀¹ s^(2m) cos(πs) ds`.
pub fn trig_moment<T: Real>(m: T) -> Result<T> {
    if !(m >= T::zero()) {
        return Err(SpectraError::InvalidParameter(format!("m must be nonnegative, got {m}")));
    }
    let p = T::two() * m;
    let f = |s: T| {
        let w = if s == T::zero() {
            if p == T::zero() { T::one() } else { T::zero() }
        } else {
            s.powf(p)
        };
        w * (T::PI() * s).cos()
    };
    Ok(integrate(f, T::zero(), T::one(), T::lit(1e-13)))
}

/// Rayleigh quotient of `cos(πt/(2ρ))` on `[-ρ, ρ]` for `Q^(k)(α)`.
pub fn trial_energy<T: Real>(k: u32, alpha: T, rho: T) -> Result<T> {
    require_k(k, 1, None)?;
    if !(rho > T::zero()) {
        return Err(SpectraError::InvalidParameter(format!("rho must be positive, got {rho}")));
    }
    let kp1 = kf::<T>(k) + T::one();
    let r = powi(rho, k + 1);
    let quad = r * r / (kp1 * kp1) * ((T::two() * kf::<T>(k) + T::lit(3.0)).recip() + trig_moment(kp1)?);
    let kinetic = pi2::<T>() / (T::lit(4.0) * rho * rho);
    let linear = if k % 2 == 1 {
        T::two() * alpha * r / kp1 * ((kp1 + T::one()).recip() + trig_moment(T::half() * kp1)?)
    } else {
        T::zero()
    };
    Ok(alpha * alpha - linear + quad + kinetic)
}

/// `ρ∗ = [¼(k+1)(2k+3)(2k+4)(2k+5)]^(1/(2k+4))`.
pub fn rho_star<T: Real>(k: u32) -> Result<T> {
    require_k(k, 1, None)?;
    Ok((ln_trial_product::<T>(k) / (T::two() * kf::<T>(k) + T::lit(4.0))).exp())
}

/// The simplified upper bound on the right of the trial estimate, as a
/// function of `ρ`: `α² + π²ρ^(2k+2)/((k+1)²(2k+3)(2k+4)(2k+5)) + π²/(4ρ²)`.
pub fn simplified_trial_bound<T: Real>(k: u32, alpha: T, rho: T) -> T {
    let kt = kf::<T>(k);
    let two = T::two();
    let kp1 = kt + T::one();
    let denom = kp1 * kp1 * (two * kt + T::lit(3.0)) * (two * kt + T::lit(4.0)) * (two * kt + T::lit(5.0));
    let r = powi(rho, k + 1);
    alpha * alpha + pi2::<T>() * r * r / denom + pi2::<T>() / (T::lit(4.0) * rho * rho)
}

/// `α² + (π²/4)((k+2)/(k+1))[¼(k+1)(2k+3)(2k+4)(2k+5)]^(-1/(k+2))`.
pub fn upper_bound<T: Real>(k: u32, alpha: T) -> Result<T> {
    require_k(k, 1, None)?;
    let kt = kf::<T>(k);
    let scale = (-ln_trial_product::<T>(k) / (kt + T::two())).exp();
    Ok(alpha * alpha + pi2::<T>() / T::lit(4.0) * (kt + T::two()) / (kt + T::one()) * scale)
}

/// `α∗ = (π/2)((k+2)/(k+1))^(1/2)[¼(k+1)(2k+3)(2k+4)(2k+5)]^(-1/(2k+4))`.
pub fn alpha_star<T: Real>(k: u32) -> Result<T> {
    require_k(k, 1, None)?;
    let kt = kf::<T>(k);
    let scale = (-ln_trial_product::<T>(k) / (T::two() * kt + T::lit(4.0))).exp();
    Ok(T::FRAC_PI_2() * ((kt + T::two()) / (kt + T::one())).sqrt() * scale)
}

/// Parameters of the splitting `[0, t̂] ∪ [t̂, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitParams<T> {
    pub eps: T,
    pub t_hat: T,
    pub alpha_hat: T,
}

/// Which split model operator is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitVariant {
    /// Neumann at both ends of `[0, t̂]`; second eigenvalue matched.
    OddNeumann,
    /// Dirichlet at 0 and Neumann at `t̂`; first eigenvalue matched.
    EvenDirichlet,
}

/// `t̂` and `α̂ = t̂^(k+1)/(k+1)` from the matching condition for a general
/// `ε`: `t̂^(2(k+2)) = π⁴(k+1) / (c·2k(1-ε))` with `c = 1` (Neumann) or
/// `c = 16` (Dirichlet).
pub fn split_from_eps<T: Real>(k: u32, eps: T, variant: SplitVariant) -> Result<SplitParams<T>> {
    require_k(k, 1, None)?;
    if !(eps > T::zero() && eps < T::one()) {
        return Err(SpectraError::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let kt = kf::<T>(k);
    let c = match variant {
        SplitVariant::OddNeumann => T::one(),
        SplitVariant::EvenDirichlet => T::lit(16.0),
    };
    let ln_base = (pi4::<T>() * (kt + T::one()) / (c * T::two() * kt * (T::one() - eps))).ln();
    let t_hat = (ln_base / (T::two() * (kt + T::two()))).exp();
    let alpha_hat = (ln_base * (kt + T::one()) / (T::two() * (kt + T::two()))).exp() / (kt + T::one());
    Ok(SplitParams { eps, t_hat, alpha_hat })
}

/// `ε = 1 - 2/(k(k+1))`, `t̂ = [π²(k+1)/2]^(1/(k+2))`,
/// `α̂ = (π²/2)[2/(π²(k+1))]^(1/(k+2))`.
pub fn split_params_odd<T: Real>(k: u32) -> Result<SplitParams<T>> {
    require_k(k, 3, Some(1))?;
    let kt = kf::<T>(k);
    let kp1 = kt + T::one();
    let kp2 = kt + T::two();
    let eps = T::one() - T::two() / (kt * kp1);
    let t_hat = pow_pos(pi2::<T>() * kp1 / T::two(), kp2.recip());
    let alpha_hat = pi2::<T>() / T::two() * pow_pos(T::two() / (pi2::<T>() * kp1), kp2.recip());
    Ok(SplitParams { eps, t_hat, alpha_hat })
}

/// `ε = 1/(2k)` with `t̂`, `α̂` from the Dirichlet–Neumann matching.
pub fn split_params_even<T: Real>(k: u32) -> Result<SplitParams<T>> {
    require_k(k, 2, Some(0))?;
    let kt = kf::<T>(k);
    let eps = (T::two() * kt).recip();
    let ln_base = (pi4::<T>() * (kt + T::one()) / (T::lit(32.0) * kt * (T::one() - eps))).ln();
    let e = T::two() * (kt + T::two());
    let t_hat = (ln_base / e).exp();
    let alpha_hat = (ln_base * (kt + T::one()) / e).exp() / (kt + T::one());
    Ok(SplitParams { eps, t_hat, alpha_hat })
}

/// `c = (2k(1-ε)/(k+1)) t̂^(2k)`, the curvature of the comparison parabola.
fn parabola_coefficient<T: Real>(k: u32, eps: T, t_hat: T) -> T {
    let kt = kf::<T>(k);
    T::two() * kt * (T::one() - eps) / (kt + T::one()) * powi(t_hat, 2 * k)
}

/// `0` on `[0, t̂]`, `c (t - t̂)²` beyond, with `c` from
/// [`parabola_coefficient`]. Requires `0 < α < ε α̂`, where `α̂ = t̂^(k+1)/(k+1)`.
pub fn comparison_potential<T: Real>(k: u32, alpha: T, eps: T, t_hat: T, t: T) -> Result<T> {
    let alpha_hat = powi(t_hat, k + 1) / (kf::<T>(k) + T::one());
    if !(alpha > T::zero() && alpha < eps * alpha_hat) {
        return Err(SpectraError::Precondition(format!(
            "alpha = {alpha} outside (0, eps*alpha_hat = {})",
            eps * alpha_hat
        )));
    }
    if t <= t_hat {
        return Ok(T::zero());
    }
    let d = t - t_hat;
    Ok(parabola_coefficient(k, eps, t_hat) * d * d)
}

/// `j`-th eigenvalues `(h₁, h₂)` of the two split operators.
pub fn h_split_spectra<T: Real>(k: u32, variant: SplitVariant, j: u32) -> Result<(T, T)> {
    if j == 0 {
        return Err(SpectraError::InvalidParameter("j must be at least 1".into()));
    }
    let p = match variant {
        SplitVariant::OddNeumann => split_params_odd::<T>(k)?,
        SplitVariant::EvenDirichlet => split_params_even::<T>(k)?,
    };
    Ok(h_split_with(k, variant, &p, j))
}

/// [`h_split_spectra`] for explicit split parameters.
pub fn h_split_with<T: Real>(k: u32, variant: SplitVariant, p: &SplitParams<T>, j: u32) -> (T, T) {
    let jt = T::of_usize(j as usize);
    let h1 = match variant {
        SplitVariant::OddNeumann => {
            let x = (jt - T::one()) * T::PI() / p.t_hat;
            x * x
        }
        SplitVariant::EvenDirichlet => {
            let x = (T::two() * jt - T::one()) * T::PI() / (T::two() * p.t_hat);
            x * x
        }
    };
    let h2 = parabola_coefficient(k, p.eps, p.t_hat).sqrt() * (T::lit(4.0) * jt - T::lit(3.0));
    (h1, h2)
}

/// `A₁(k) = (2(k+1)/(k+6))[(2k+3)(2k+4)(2k+5)/(π⁴(k+1))]^(1/(k+2))`.
pub fn a1<T: Real>(k: u32) -> Result<T> {
    require_k(k, 1, None)?;
    let kt = kf::<T>(k);
    let two = T::two();
    let ln = (two * kt + T::lit(3.0)).ln() + (two * kt + T::lit(4.0)).ln() + (two * kt + T::lit(5.0)).ln()
        - pi4::<T>().ln()
        - (kt + T::one()).ln();
    Ok(two * (kt + T::one()) / (kt + T::lit(6.0)) * (ln / (kt + two)).exp())
}

/// The weaker comparison `(2(k+1)/(k+6))(8(k+1)²/π⁴)^(1/(k+2))` below `A₁`.
pub fn a1_floor<T: Real>(k: u32) -> Result<T> {
    require_k(k, 1, None)?;
    let kt = kf::<T>(k);
    let kp1 = kt + T::one();
    let ln = (T::lit(8.0) * kp1 * kp1 / pi4::<T>()).ln();
    Ok(T::two() * kp1 / (kt + T::lit(6.0)) * (ln / (kt + T::two())).exp())
}

/// `A₂(k) = ((k+1)/(k+6))[(8/π⁴)(k-½)(2k+3)(2k+4)(2k+5)]^(1/(k+2))`.
pub fn a2<T: Real>(k: u32) -> Result<T> {
    require_k(k, 2, Some(0))?;
    let kt = kf::<T>(k);
    let two = T::two();
    let ln = (T::lit(8.0) / pi4::<T>()).ln()
        + (kt - T::half()).ln()
        + (two * kt + T::lit(3.0)).ln()
        + (two * kt + T::lit(4.0)).ln()
        + (two * kt + T::lit(5.0)).ln();
    Ok((kt + T::one()) / (kt + T::lit(6.0)) * (ln / (kt + two)).exp())
}

/// `B(k) = ((k+1)/(k+6))[(128/π⁴)(k+1)³]^(1/(k+2))`.
pub fn b<T: Real>(k: u32) -> Result<T> {
    require_k(k, 2, Some(0))?;
    let kt = kf::<T>(k);
    let ln = (T::lit(128.0) / pi4::<T>()).ln() + T::lit(3.0) * (kt + T::one()).ln();
    Ok((kt + T::one()) / (kt + T::lit(6.0)) * (ln / (kt + T::two())).exp())
}

/// `inf_t Σ_{j=0}^{k} t^j` for even `k`, attained at the unique zero of the
/// derivative in `(-1, 0)`.
pub fn m_k<T: Real>(k: u32) -> Result<T> {
    require_k(k, 2, Some(0))?;
    let poly = |t: T| (0..=k).rev().fold(T::zero(), |acc, _| acc * t + T::one());
    let deriv = |t: T| (1..=k).rev().fold(T::zero(), |acc, j| acc * t + T::of_usize(j as usize));
    let (mut lo, mut hi) = (T::lit(-1.0 + 1e-9), T::lit(-1e-9));
    let (flo, fhi) = (deriv(lo), deriv(hi));
    if !(flo < T::zero() && fhi > T::zero()) {
        return Err(SpectraError::Bracket(format!("derivative does not change sign for k = {k}")));
    }
    while hi - lo > T::lit(1e-12) {
        let mid = T::half() * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if deriv(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(poly(T::half() * (lo + hi)))
}

/// `m_k α^(k/(k+1)) (k+1)^(-1/(k+1)) (2j-1)`, a lower bound for `λ_j` (even `k`, `α > 0`).
pub fn even_lower_eig<T: Real>(k: u32, alpha: T, j: u32) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(SpectraError::InvalidParameter(format!("alpha must be positive, got {alpha}")));
    }
    if j == 0 {
        return Err(SpectraError::InvalidParameter("j must be at least 1".into()));
    }
    let kt = kf::<T>(k);
    let kp1 = kt + T::one();
    let m = m_k::<T>(k)?;
    Ok(m * pow_pos(alpha, kt / kp1) * pow_pos(kp1, -kp1.recip()) * T::of_usize(2 * j as usize - 1))
}

/// `[((k+1)^(1/(k+1)) / m_k) · upper_bound(k, 0)]^((k+1)/k)`.
pub fn alpha_star_star<T: Real>(k: u32) -> Result<T> {
    let m = m_k::<T>(k)?;
    let kt = kf::<T>(k);
    let kp1 = kt + T::one();
    let inner = pow_pos(kp1, kp1.recip()) / m * upper_bound(k, T::zero())?;
    Ok(pow_pos(inner, kp1 / kt))
}

/// Lower bound for `λ₂` of the half-line Neumann operator (odd `k`,
/// `π²[2/(π²(k+1))]^(2/(k+2))`) or for `λ₁` of the half-line Dirichlet
/// operator (even `k`, `(π²/4)[32(k-½)/(π⁴(k+1))]^(1/(k+2))`), valid for
/// `0 ≤ α ≤ α∗`.
pub fn lambda2_lower<T: Real>(k: u32) -> Result<T> {
    require_k(k, 1, None)?;
    let kt = kf::<T>(k);
    let kp1 = kt + T::one();
    let kp2 = kt + T::two();
    Ok(if k % 2 == 1 {
        pi2::<T>() * pow_pos(T::two() / (pi2::<T>() * kp1), T::two() / kp2)
    } else {
        pi2::<T>() / T::lit(4.0) * pow_pos(T::lit(32.0) * (kt - T::half()) / (pi4::<T>() * kp1), kp2.recip())
    })
}

/// Every constant for one `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport<T> {
    pub k: u32,
    /// `(α, upper_bound(k, α))` on a uniform grid of `[0, α∗]`.
    pub upper_samples: Vec<(T, T)>,
    pub alpha_star: T,
    pub rho_star: T,
    /// Split parameters; absent for `k = 1`, where `ε` would be 0.
    pub split: Option<SplitParams<T>>,
    pub a1: T,
    pub a2: Option<T>,
    pub b: Option<T>,
    pub m_k: Option<T>,
    pub alpha_star_star: Option<T>,
    pub lambda2_lower: T,
}

pub fn bounds_report<T: Real>(k: u32, samples: usize) -> Result<BoundsReport<T>> {
    require_k(k, 1, None)?;
    let alpha_star = alpha_star::<T>(k)?;
    let upper_samples = (0..samples)
        .map(|i| {
            let a = alpha_star * T::of_usize(i) / T::of_usize(samples.saturating_sub(1).max(1));
            upper_bound(k, a).map(|u| (a, u))
        })
        .collect::<Result<Vec<_>>>()?;
    let even = k.is_multiple_of(2);
    let split = if even {
        Some(split_params_even(k)?)
    } else if k >= 3 {
        Some(split_params_odd(k)?)
    } else {
        None
    };
    Ok(BoundsReport {
        k,
        upper_samples,
        alpha_star,
        rho_star: rho_star(k)?,
        split,
        a1: a1(k)?,
        a2: if even { Some(a2(k)?) } else { None },
        b: if even { Some(b(k)?) } else { None },
        m_k: if even { Some(m_k(k)?) } else { None },
        alpha_star_star: if even { Some(alpha_star_star(k)?) } else { None },
        lambda2_lower: lambda2_lower(k)?,
    })
}
