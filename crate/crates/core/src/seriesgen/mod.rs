//! Lindstedt-Poincare series for the van der Pol limit cycle.
//!
//! [`generate_series`] expands the frequency `Omega(mu)`, the amplitude
//! `A(mu)` and the periodic solution `y(tau) = sum y_n(tau) mu^n`, either in
//! exact rational arithmetic or in binary floating point at a fixed number of
//! decimal digits.

mod diagnostic;
mod exact;
mod grid;
mod io;
mod lp;
mod series;
mod trig;

pub use diagnostic::{digit_loss_diagnostic, DigitLoss, LinearFit};
pub use exact::ExactEngine;
pub use grid::GridEngine;
pub use io::{CoeffFile, Mode, Quantity};
pub use lp::{CubicEngine, LpScalar, LpState};
pub use series::{period_series, PowerSeries, Variable};
pub use trig::TrigPoly;

use crate::error::{Error, Result};
use crate::real::{Precision, Real};
use crate::scalar::Rational;

/// Smallest working precision accepted for floating-point generation.
pub const MIN_FLOAT_DIGITS: u32 = 50;

/// Default floating-point working precision.
pub const DEFAULT_DIGITS: u32 = 250;

impl LpScalar for Real {
    fn cubic_engine(prec: Precision, max_order: usize) -> Box<dyn CubicEngine<Real>> {
        Box::new(GridEngine::new(prec, max_order))
    }
}

impl LpScalar for Rational {
    fn cubic_engine(_: (), _: usize) -> Box<dyn CubicEngine<Rational>> {
        Box::new(ExactEngine::new())
    }
}

/// Output of [`generate_series`], truncated at `mu^N`.
#[derive(Debug, Clone)]
pub struct LpSeries<T> {
    pub omega: PowerSeries<T>,
    pub amplitude: PowerSeries<T>,
    /// `y_0..=y_N`, each including its `a_n cos tau` term.
    pub solutions: Vec<TrigPoly<T>>,
}

/// Runs the recursion through order `order` in `mu`.
///
/// The amplitude `a_N` needs the secularity condition of order `N + 1`, so
/// the forcing of that order is formed as well (without solving it).
pub fn generate_series<T: LpScalar>(order: usize, ctx: T::Ctx) -> Result<LpSeries<T>> {
    if let Some(d) = T::from_int(1, ctx).working_digits() {
        if d < MIN_FLOAT_DIGITS {
            return Err(Error::Precondition(format!(
                "floating-point series need at least {MIN_FLOAT_DIGITS} digits, got {d}"
            )));
        }
    }
    let mut state = LpState::<T>::new(ctx, order + 1)?;
    for _ in 0..order {
        state.step()?;
    }
    state.close()?;
    Ok(LpSeries {
        omega: PowerSeries::new(Variable::Mu, state.omega().to_vec()),
        amplitude: PowerSeries::new(Variable::Mu, state.amplitude().to_vec()),
        solutions: state.solutions().to_vec(),
    })
}

pub fn generate_exact(order: usize) -> Result<LpSeries<Rational>> {
    generate_series::<Rational>(order, ())
}

pub fn generate_float(order: usize, prec: Precision) -> Result<LpSeries<Real>> {
    generate_series::<Real>(order, prec)
}
