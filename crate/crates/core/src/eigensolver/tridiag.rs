//! Symmetric tridiagonal kernels: Sturm counts, bisection and inverse iteration.
//!
//! Matrices are passed as the main diagonal `d[0..n]` and the squared
//! off-diagonal `e2[0..n-1]` (Sturm counting only needs squares) or the
//! off-diagonal itself for linear solves.

use crate::error::{Result, SpectraError};
use crate::scalar::Real;

/// Number of eigenvalues strictly below `x`.
///
/// Counts negative pivots of the LDLᵀ factorization of `T - x I`.
pub fn sturm_count<T: Real>(d: &[T], e2: &[T], x: T) -> usize {
    let n = d.len();
    if n == 0 {
        return 0;
    }
    let guard = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = d[0] - x;
    for i in 0..n {
        if i > 0 {
            q = (d[i] - x) - e2[i - 1] / q;
        }
        if q.abs() < guard {
            q = -guard;
        }
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval containing every eigenvalue.
pub fn gershgorin<T: Real>(d: &[T], e2: &[T]) -> (T, T) {
    let n = d.len();
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for i in 0..n {
        let left = if i > 0 { e2[i - 1].sqrt() } else { T::zero() };
        let right = if i + 1 < n { e2[i].sqrt() } else { T::zero() };
        lo = lo.min(d[i] - left - right);
        hi = hi.max(d[i] + left + right);
    }
    (lo, hi)
}

/// The `m` smallest eigenvalues by bisection on the Sturm count.
///
/// `lower` must not exceed the smallest eigenvalue. `upper_hint` is a guess
/// for an upper bound on the `m`-th eigenvalue; it is doubled until it is one,
/// falling back to the Gershgorin bound.
pub fn smallest_eigenvalues<T: Real>(
    d: &[T],
    e2: &[T],
    m: usize,
    lower: T,
    upper_hint: T,
    rel_tol: T,
) -> Result<Vec<T>> {
    let n = d.len();
    if m == 0 || m > n {
        return Err(SpectraError::InvalidParameter(format!(
            "requested {m} eigenvalues of a {n}x{n} matrix"
        )));
    }
    let (g_lo, g_hi) = gershgorin(d, e2);
    let lo0 = lower.min(g_lo);
    if sturm_count(d, e2, lo0) != 0 {
        return Err(SpectraError::NonConvergence(format!(
            "lower bound {lo0} is not below the spectrum"
        )));
    }
    let mut hi0 = upper_hint.max(lo0 + T::one());
    while sturm_count(d, e2, hi0) < m {
        if hi0 >= g_hi {
            hi0 = g_hi + T::one();
            if sturm_count(d, e2, hi0) < m {
                return Err(SpectraError::NonConvergence(
                    "Gershgorin upper bound does not enclose the spectrum".into(),
                ));
            }
            break;
        }
        hi0 = (hi0 - lo0) * T::two() + lo0;
    }

    let mut out = Vec::with_capacity(m);
    let mut floor = lo0;
    for j in 0..m {
        let (mut a, mut b) = (floor, hi0);
        loop {
            let mid = T::half() * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let scale = mid.abs().max(T::min_positive_value());
            if b - a <= rel_tol * scale {
                break;
            }
            if sturm_count(d, e2, mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        let lambda = T::half() * (a + b);
        out.push(lambda);
        floor = a;
    }
    Ok(out)
}

/// Solves `(T - shift I) x = rhs` for symmetric tridiagonal `T` by LDLᵀ
/// without pivoting. Intended for shifts below the spectrum, where the
/// shifted matrix is positive definite.
pub fn solve_shifted<T: Real>(d: &[T], e: &[T], shift: T, rhs: &[T]) -> Result<Vec<T>> {
    let n = d.len();
    let mut piv = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for i in 0..n {
        let (p, yi) = if i == 0 {
            (d[0] - shift, rhs[0])
        } else {
            let l = e[i - 1] / piv[i - 1];
            (d[i] - shift - l * e[i - 1], rhs[i] - l * y[i - 1])
        };
        if p == T::zero() || !p.is_finite() {
            return Err(SpectraError::NonConvergence(format!("zero pivot at row {i}")));
        }
        piv.push(p);
        y.push(yi);
    }
    let mut x = vec![T::zero(); n];
    x[n - 1] = y[n - 1] / piv[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (y[i] - e[i] * x[i + 1]) / piv[i];
    }
    Ok(x)
}

/// Iterations after which the residual test is also accepted.
const SLOW_AFTER: usize = 10;

/// Eigenvector for the eigenvalue nearest above `shift`, by inverse
/// iteration. Returned with unit Euclidean norm and positive sum.
pub fn inverse_iteration<T: Real>(d: &[T], e: &[T], shift: T, max_iter: usize) -> Result<Vec<T>> {
    let n = d.len();
    let mut v = vec![T::one() / T::of_usize(n).sqrt(); n];
    let tol = T::lit(1e-14).max(T::epsilon() * T::lit(16.0));
    let scale = d.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
        + T::two() * e.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
    for iter in 0..max_iter {
        let mut w = solve_shifted(d, e, shift, &v)?;
        let norm = w.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(SpectraError::NonConvergence("inverse iteration lost the vector".into()));
        }
        let sum = w.iter().fold(T::zero(), |acc, &x| acc + x);
        let sign = if sum < T::zero() { -T::one() } else { T::one() };
        for x in &mut w {
            *x = *x * sign / norm;
        }
        let change = w
            .iter()
            .zip(&v)
            .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs()));
        v = w;
        // A near-degenerate pair keeps the vector drifting inside its span;
        // once convergence is that slow, a rounding-level residual is as
        // converged as it gets.
        if change <= tol || (iter >= SLOW_AFTER && residual(d, e, &v) <= tol * scale) {
            return Ok(v);
        }
    }
    Err(SpectraError::NonConvergence(format!(
        "inverse iteration did not settle in {max_iter} steps"
    )))
}

/// `‖T v - ρ v‖∞` with `ρ` the Rayleigh quotient of the unit vector `v`.
fn residual<T: Real>(d: &[T], e: &[T], v: &[T]) -> T {
    let n = d.len();
    let apply = |i: usize| {
        let mut y = d[i] * v[i];
        if i > 0 {
            y = y + e[i - 1] * v[i - 1];
        }
        if i + 1 < n {
            y = y + e[i] * v[i + 1];
        }
        y
    };
    let rho = (0..n).fold(T::zero(), |acc, i| acc + v[i] * apply(i));
    (0..n).fold(T::zero(), |acc, i| acc.max((apply(i) - rho * v[i]).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_on_2x2() {
        // [[1, -1], [-1, 3]]: eigenvalues 2 ∓ √2
        let d = [1.0f64, 3.0];
        let e2 = [1.0];
        assert_eq!(sturm_count(&d, &e2, 0.0), 0);
        assert_eq!(sturm_count(&d, &e2, 1.0), 1);
        assert_eq!(sturm_count(&d, &e2, 4.0), 2);
    }

    #[test]
    fn chain_eigenvalues() {
        // d = 2, e = -1: eigenvalues 2 - 2cos(jπ/(n+1))
        let n = 40;
        let d = vec![2.0f64; n];
        let e2 = vec![1.0; n - 1];
        let ev = smallest_eigenvalues(&d, &e2, 5, 0.0, 0.1, 1e-14).unwrap();
        for (j, &lam) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-13, "j={j}: {lam} vs {exact}");
        }
    }

    #[test]
    fn too_many_eigenvalues_rejected() {
        let d = [1.0f64, 2.0, 3.0];
        let e2 = [0.0, 0.0];
        assert!(smallest_eigenvalues(&d, &e2, 4, 0.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn inverse_iteration_recovers_ground_mode() {
        let n = 30;
        let d = vec![2.0f64; n];
        let e = vec![-1.0; n - 1];
        let e2 = vec![1.0; n - 1];
        let lam = smallest_eigenvalues(&d, &e2, 1, 0.0, 1.0, 1e-14).unwrap()[0];
        let v = inverse_iteration(&d, &e, lam - 1e-6, 100).unwrap();
        let theta = std::f64::consts::PI / (n + 1) as f64;
        let norm = (0..n).map(|i| ((i + 1) as f64 * theta).sin().powi(2)).sum::<f64>().sqrt();
        for (i, &x) in v.iter().enumerate() {
            assert!((x - ((i + 1) as f64 * theta).sin() / norm).abs() < 1e-12);
        }
    }
}
