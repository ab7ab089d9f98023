use std::fmt;

use crate::error::{Error, Result};
use crate::real::{Precision, Real};
use crate::scalar::{Rational, Scalar};

/// Expansion variable of a [`PowerSeries`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    Mu,
    /// `nu = mu^2`.
    Nu,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variable::Mu => "mu",
            Variable::Nu => "nu",
        })
    }
}

/// Truncated power series `sum_{n=0}^{order} c_n x^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    variable: Variable,
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerSeries<T> {
    pub fn new(variable: Variable, coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least its constant term");
        PowerSeries { variable, coeffs }
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Highest retained power.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn truncated(&self, len: usize) -> Self {
        PowerSeries::new(self.variable, self.coeffs[..len.min(self.coeffs.len())].to_vec())
    }

    pub fn working_digits(&self) -> Option<u32> {
        self.coeffs[0].working_digits()
    }

    /// Multiplicative inverse through the same order.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Precondition("series reciprocal needs a nonzero constant term".into()));
        }
        let ctx = c0.ctx();
        let inv0 = T::from_int(1, ctx) / c0;
        let mut out: Vec<T> = Vec::with_capacity(self.coeffs.len());
        out.push(inv0.clone());
        for n in 1..self.coeffs.len() {
            let mut acc = T::zero(ctx);
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc = acc + self.coeffs[k].clone() * &out[n - k];
                }
            }
            out.push(-(acc * &inv0));
        }
        Ok(PowerSeries::new(self.variable, out))
    }

    /// Keeps the even-index coefficients, reindexed as a series in `nu = mu^2`.
    ///
    /// Odd coefficients must vanish (exactly, or below `10^(-P/2)` at `P`
    /// digits); anything larger signals a corrupted series.
    pub fn to_nu(&self) -> Result<Self> {
        if self.variable != Variable::Mu {
            return Err(Error::Precondition("to_nu expects a series in mu".into()));
        }
        for (index, c) in self.coeffs.iter().enumerate().skip(1).step_by(2) {
            if !c.is_negligible() {
                return Err(Error::OddCoefficient { index, magnitude: 10f64.powf(c.log10_abs()) });
            }
        }
        let even = self.coeffs.iter().step_by(2).cloned().collect();
        Ok(PowerSeries::new(Variable::Nu, even))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PowerSeries<U> {
        PowerSeries::new(self.variable, self.coeffs.iter().map(f).collect())
    }
}

impl PowerSeries<Real> {
    pub fn precision(&self) -> Precision {
        self.coeffs[0].precision()
    }

    /// Horner evaluation at a real point.
    pub fn evaluate(&self, x: &Real) -> Real {
        self.coeffs
            .iter()
            .rev()
            .fold(Real::zero(x.precision().max(self.precision())), |acc, c| acc * x + c)
    }
}

impl PowerSeries<Rational> {
    pub fn to_real(&self, prec: Precision) -> PowerSeries<Real> {
        self.map(|c| c.to_real(prec))
    }
}

/// Series of the period `2 pi / Omega` from the frequency series.
pub fn period_series(omega: &PowerSeries<Real>) -> Result<PowerSeries<Real>> {
    let inv = omega.reciprocal()?;
    let two_pi = Real::pi(omega.precision()).mul_int(2);
    Ok(inv.map(|c| c * &two_pi))
}
