//! Van der Pol limit cycle: perturbation series, their singularities, and
//! resummation for all coupling strengths.
//!
//! * [`seriesgen`] builds the Lindstedt-Poincare series of the frequency and
//!   amplitude in exact or high-precision floating-point arithmetic.
//! * [`shafer`] locates the complex branch points limiting their convergence
//!   with quadratic Hermite-Pade approximants.
//! * [`resum`] combines the branch-point map with the large-`mu` asymptotics
//!   and Pade approximation into values valid for every `mu`.
//! * [`oracle`] computes reference period and amplitude by shooting on the
//!   differential equation with a Taylor-series integrator.

pub mod error;
pub mod linalg;
pub mod oracle;
pub mod real;
pub mod scalar;
pub mod resum;
pub mod seriesgen;
pub mod shafer;

pub use error::{Error, Result};
pub use real::{Complex, Precision, Real};
pub use scalar::{Rational, Scalar};
