//! The operator family `-d²/dt² + (t^(k+1)/(k+1) - α)²` and its potential.
//!
//! [`OperatorSpec`] bundles the exponent parameter `k`, the shift `α` and the
//! boundary treatment. Whole-line problems live on `ℝ`; the two half-line
//! variants live on `(0, ∞)` with a Neumann or Dirichlet condition at `t = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectraError};
use crate::scalar::{pow_pos, powi, Real};

/// Boundary treatment at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    WholeLine,
    HalfLineNeumann,
    HalfLineDirichlet,
}

impl Boundary {
    pub fn is_half_line(self) -> bool {
        !matches!(self, Boundary::WholeLine)
    }
}

/// Anything that can be sampled as a potential on the real line.
pub trait Potential<T: Real>: Send + Sync {
    fn value(&self, t: T) -> T;

    fn boundary(&self) -> Boundary {
        Boundary::WholeLine
    }
}

/// A potential given by a closure together with its boundary treatment.
#[derive(Clone)]
pub struct PotentialFn<F> {
    f: F,
    boundary: Boundary,
}

impl<F> PotentialFn<F> {
    pub fn new(f: F, boundary: Boundary) -> Self {
        Self { f, boundary }
    }
}

impl<T: Real, F: Fn(T) -> T + Send + Sync> Potential<T> for PotentialFn<F> {
    fn value(&self, t: T) -> T {
        (self.f)(t)
    }

    fn boundary(&self) -> Boundary {
        self.boundary
    }
}

/// `(k, α, boundary)`, selecting one member of the operator family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec<T> {
    pub k: u32,
    pub alpha: T,
    pub boundary: Boundary,
}

impl<T: Real> OperatorSpec<T> {
    pub fn new(k: u32, alpha: T, boundary: Boundary) -> Result<Self> {
        if k == 0 {
            return Err(SpectraError::InvalidParameter("k must be at least 1".into()));
        }
        if !alpha.is_finite() {
            return Err(SpectraError::InvalidParameter(format!("alpha must be finite, got {alpha}")));
        }
        Ok(Self { k, alpha, boundary })
    }

    pub fn whole_line(k: u32, alpha: T) -> Result<Self> {
        Self::new(k, alpha, Boundary::WholeLine)
    }

    pub fn with_alpha(self, alpha: T) -> Self {
        Self { alpha, ..self }
    }

    pub fn with_boundary(self, boundary: Boundary) -> Self {
        Self { boundary, ..self }
    }

    /// `t^(k+1) / (k+1)`, the α-independent part of the potential.
    #[inline]
    pub fn profile(&self, t: T) -> T {
        powi(t, self.k + 1) / T::of_usize(self.k as usize + 1)
    }

    #[inline]
    pub fn potential(&self, t: T) -> T {
        let d = self.profile(t) - self.alpha;
        d * d
    }

    /// Potential of the dilated operator `-ρ⁻² d²/dt² + (ρ^(k+1) t^(k+1)/(k+1) - α)²`.
    pub fn scaled_potential(&self, rho: ScalingParam<T>, t: T) -> T {
        if rho.rho() == T::one() {
            return self.potential(t);
        }
        let d = powi(rho.rho(), self.k + 1) * self.profile(t) - self.alpha;
        d * d
    }

    /// The nonnegative point where `t^(k+1)/(k+1) = α`.
    pub fn well_center(&self) -> Result<T> {
        if self.alpha == T::zero() {
            return Ok(T::zero());
        }
        let kp1 = T::of_usize(self.k as usize + 1);
        if self.alpha > T::zero() {
            return Ok(pow_pos(kp1 * self.alpha, kp1.recip()));
        }
        if self.k.is_multiple_of(2) {
            // k+1 odd: the root is negative, so there is no nonnegative one.
            return Err(SpectraError::UndefinedInput(format!(
                "no nonnegative well center for even k = {} and alpha = {}",
                self.k, self.alpha
            )));
        }
        // k+1 even and α < 0: the profile never reaches α; the potential is
        // smallest at t = 0.
        Ok(T::zero())
    }
}

impl<T: Real> Potential<T> for OperatorSpec<T> {
    #[inline]
    fn value(&self, t: T) -> T {
        self.potential(t)
    }

    fn boundary(&self) -> Boundary {
        self.boundary
    }
}

/// The dilation parameter `ρ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingParam<T>(T);

impl<T: Real> ScalingParam<T> {
    pub fn new(rho: T) -> Result<Self> {
        if rho > T::zero() && rho.is_finite() {
            Ok(Self(rho))
        } else {
            Err(SpectraError::InvalidParameter(format!("rho must be positive, got {rho}")))
        }
    }

    pub fn identity() -> Self {
        Self(T::one())
    }

    pub fn rho(&self) -> T {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(k: u32, alpha: f64) -> OperatorSpec<f64> {
        OperatorSpec::whole_line(k, alpha).unwrap()
    }

    #[test]
    fn potential_examples() {
        assert_eq!(spec(1, 0.0).potential(0.0), 0.0);
        assert_eq!(spec(1, 2.0).potential(2.0), 0.0);
        assert!((spec(3, 0.16).potential(1.0) - 0.0081).abs() < 1e-15);
    }

    #[test]
    fn scaled_potential_examples() {
        let rho2 = ScalingParam::new(2.0).unwrap();
        assert_eq!(spec(1, 0.0).scaled_potential(ScalingParam::identity(), 1.0), 0.25);
        assert_eq!(spec(1, 1.0).scaled_potential(rho2, 1.0), 1.0);
        for k in 1..6 {
            assert!((spec(k, -0.7).scaled_potential(rho2, 0.0) - 0.49).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(ScalingParam::new(0.0f64).is_err());
        assert!(ScalingParam::new(-1.0f64).is_err());
        assert!(OperatorSpec::whole_line(0, 0.0f64).is_err());
        assert!(OperatorSpec::whole_line(1, f64::NAN).is_err());
    }

    #[test]
    fn well_center_examples() {
        assert!((spec(1, 2.0).well_center().unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(spec(3, 0.0).well_center().unwrap(), 0.0);
        assert!((spec(3, 1.0).well_center().unwrap() - 2.0f64.sqrt()).abs() < 1e-14);
        assert!(matches!(
            spec(2, -1.0).well_center(),
            Err(SpectraError::UndefinedInput(_))
        ));
    }

    #[test]
    fn works_in_single_precision() {
        let s = OperatorSpec::whole_line(3, 0.16f32).unwrap();
        assert!((s.potential(1.0) - 0.0081).abs() < 1e-6);
    }

    proptest! {
        #[test]
        fn even_k_reflection_symmetry(k in 1u32..6, alpha in -3.0f64..3.0, t in -2.0f64..2.0) {
            let k = 2 * k;
            let a = spec(k, alpha).potential(t);
            let b = spec(k, -alpha).potential(-t);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }

        #[test]
        fn odd_k_potential_is_even(k in 0u32..5, alpha in -3.0f64..3.0, t in -2.0f64..2.0) {
            let s = spec(2 * k + 1, alpha);
            prop_assert_eq!(s.potential(t), s.potential(-t));
        }

        #[test]
        fn odd_k_negative_alpha_barrier(k in 0u32..5, alpha in -3.0f64..-0.01, t in -3.0f64..3.0) {
            let s = spec(2 * k + 1, alpha);
            prop_assert!(s.potential(t) >= alpha * alpha);
        }

        #[test]
        fn unit_scaling_is_identity(k in 1u32..10, alpha in -3.0f64..3.0, t in -2.0f64..2.0) {
            let s = spec(k, alpha);
            prop_assert_eq!(s.scaled_potential(ScalingParam::identity(), t).to_bits(), s.potential(t).to_bits());
        }

        #[test]
        fn well_center_is_a_zero(k in 1u32..10, alpha in 0.0f64..5.0) {
            let s = spec(k, alpha);
            let c = s.well_center().unwrap();
            prop_assert!(c >= 0.0);
            prop_assert!((s.profile(c) - alpha).abs() <= 1e-12 * alpha.max(1.0));
        }
    }
}
