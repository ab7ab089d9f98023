//! Reference period and amplitude of the limit cycle by shooting on
//! `x'' + x = mu x' (1 - x^2)` with a Taylor-series integrator.

mod taylor;

use std::fmt::Write as _;

pub use taylor::{first_return, integrate, Endpoint, Return};

use crate::error::{Error, Result};
use crate::real::{Precision, Real};

pub const MAX_NEWTON_ITERATIONS: usize = 50;

#[derive(Debug, Clone)]
pub struct LimitCycle {
    pub mu: Real,
    pub period: Real,
    pub amplitude: Real,
    /// `|x(T) - A|` at the accepted solution, where `x'(T) = 0`.
    pub residual: Real,
    pub precision_digits: u32,
    /// Integration steps over one period at the accepted solution.
    pub steps_taken: usize,
    pub newton_iterations: usize,
}

/// Starting `(T, A)` for the shooting Newton iteration.
pub fn initial_guess(mu: &Real) -> (Real, Real) {
    let prec = mu.precision();
    let m = mu.to_f64();
    let t = if m < 2.0 {
        std::f64::consts::TAU * (1.0 + m * m / 16.0)
    } else {
        (3.0 - 4f64.ln()) * m + 7.014 * m.powf(-1.0 / 3.0)
    };
    (Real::from_f64(t, prec), Real::from_int(2, prec))
}

/// Finds the fixed point `A = P(A)` of the return map `P` from `(A, 0)` to
/// the next maximum of `x`; the return time is the period.
///
/// Newton iteration on `P(A) - A` with a central-difference derivative of
/// step `10^(-digits/3)`. The residual is `|P(A) - A|`; `x'` vanishes at the
/// return point by construction.
pub fn limit_cycle(mu: &Real, digits: u32, guess: Option<(Real, Real)>) -> Result<LimitCycle> {
    if mu.is_negative() || mu.is_zero() {
        return Err(Error::Precondition("limit cycle needs mu > 0".into()));
    }
    let prec = Precision::from_digits(digits);
    let mu = mu.with_precision(prec);
    let (t_guess, a) = guess.unwrap_or_else(|| initial_guess(&mu));
    let mut a = a.with_precision(prec);
    let t_max = 3.0 * t_guess.to_f64().max(initial_guess(&mu).0.to_f64()) + 50.0;
    let delta = prec.epsilon_pow((digits / 3) as i64);
    let accept = -(digits as f64) / 2.0;
    let stop = -(digits as f64) + 8.0;
    let mut best: Option<LimitCycle> = None;

    for iter in 1..=MAX_NEWTON_ITERATIONS {
        let ret = first_return(&mu, &a, digits, t_max)?;
        let g = &ret.x - &a;
        let residual = g.abs();
        let res_log = residual.log10_abs();
        if res_log < accept {
            let improved = best.as_ref().is_none_or(|b| residual < b.residual);
            if improved {
                best = Some(LimitCycle {
                    mu: mu.clone(),
                    period: ret.time.clone(),
                    amplitude: a.clone(),
                    residual: residual.clone(),
                    precision_digits: digits,
                    steps_taken: ret.steps,
                    newton_iterations: iter,
                });
            }
            if res_log < stop || !improved {
                break;
            }
        }
        let plus = first_return(&mu, &(&a + &delta), digits, t_max)?;
        let minus = first_return(&mu, &(&a - &delta), digits, t_max)?;
        let slope = (plus.x - minus.x) / delta.mul_int(2) - Real::one(prec);
        if slope.is_zero() {
            return Err(Error::Singular("return-map derivative".into()));
        }
        let mut step = g / slope;
        let cap = a.abs().div_int(2);
        if step.abs() > cap {
            step = if step.is_negative() { -cap } else { cap };
        }
        a = a - step;
    }
    best.ok_or_else(|| Error::NoConvergence(format!("shooting at mu = {} after {MAX_NEWTON_ITERATIONS} iterations", mu.to_f64())))
}

/// Solves every `mu` in order, warm-starting from the previous success
/// shifted by the change in the initial-guess formula.
pub fn reference_table(mus: &[Real], digits: u32) -> Vec<(Real, Result<LimitCycle>)> {
    let mut prev: Option<LimitCycle> = None;
    let mut out = Vec::with_capacity(mus.len());
    for mu in mus {
        let guess = prev.as_ref().map(|p| {
            let (g_now, _) = initial_guess(mu);
            let (g_prev, _) = initial_guess(&p.mu);
            (&p.period + (g_now - g_prev), p.amplitude.clone())
        });
        let r = limit_cycle(mu, digits, guess).or_else(|e| match e {
            Error::NoConvergence(_) | Error::Singular(_) => limit_cycle(mu, digits, None),
            other => Err(other),
        });
        if let Ok(c) = &r {
            prev = Some(c.clone());
        }
        out.push((mu.clone(), r));
    }
    out
}

/// `mu,T,A,residual,precision_digits,error`.
pub fn reference_csv(rows: &[(Real, Result<LimitCycle>)]) -> String {
    let mut out = String::from("mu,T,A,residual,precision_digits,error\n");
    for (mu, r) in rows {
        let line = match r {
            Ok(c) => {
                let d = c.precision_digits as usize;
                format!(
                    "{},{},{},{},{},",
                    mu.to_sci_string(d),
                    c.period.to_sci_string(d),
                    c.amplitude.to_sci_string(d),
                    c.residual.to_sci_string(6),
                    c.precision_digits
                )
            }
            Err(e) => format!("{},,,,,\"{e}\"", mu.to_sci_string(20)),
        };
        writeln!(out, "{line}").expect("writing to a String");
    }
    out
}
