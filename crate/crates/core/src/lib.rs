//! Spectral analysis of `-d²/dt² + (t^(k+1)/(k+1) - α)²`.
//!
//! Everything numerical is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix `f64`, which is what the reported numbers use.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod calculus;
pub mod eigensolver;
pub mod error;
pub mod limit;
pub mod minimizer;
pub mod operator;
pub mod scalar;

pub use error::{Result, SpectraError};
pub use operator::{Boundary, OperatorSpec, Potential, PotentialFn, ScalingParam};
pub use scalar::Real;

pub type Spec = OperatorSpec<f64>;
pub type Scaling = ScalingParam<f64>;
pub type Grid = eigensolver::Grid<f64>;
pub type Spectrum = eigensolver::Spectrum<f64>;
pub type Eigenpair = eigensolver::Eigenpair<f64>;
pub type BandPoint = calculus::BandPoint<f64>;
pub type BandSolver = calculus::BandSolver<f64>;
pub type Certificate = calculus::NondegeneracyCertificate<f64>;
pub type CriticalPointReport = minimizer::CriticalPointReport<f64>;
pub type BoundsReport = bounds::BoundsReport<f64>;
pub type SplitParams = bounds::SplitParams<f64>;
pub type GlueSystem = limit::GlueSystem<f64>;
pub type LimitEigenvalue = limit::LimitEigenvalue<f64>;
