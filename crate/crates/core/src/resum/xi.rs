use crate::error::{Error, Result};
use crate::real::{Precision, Real};
use crate::seriesgen::{PowerSeries, Variable};

/// `xi(nu) = (nu^2 - 2 nu R cos phi + R^2)^(1/4)` for a branch pair
/// `R e^(+-i phi)`.
#[derive(Debug, Clone)]
pub struct XiMap {
    modulus: Real,
    phase: Real,
}

impl XiMap {
    pub fn new(modulus: Real, phase: Real) -> Result<XiMap> {
        let pi = Real::pi(phase.precision());
        if modulus.is_negative() || modulus.is_zero() {
            return Err(Error::Precondition("xi map needs R > 0".into()));
        }
        if phase.is_negative() || phase.is_zero() || phase >= pi {
            return Err(Error::Precondition("xi map needs 0 < phi < pi".into()));
        }
        Ok(XiMap { modulus, phase })
    }

    pub fn modulus(&self) -> &Real {
        &self.modulus
    }

    pub fn phase(&self) -> &Real {
        &self.phase
    }

    pub fn precision(&self) -> Precision {
        self.modulus.precision()
    }

    /// `nu^2 - 2 nu R cos phi + R^2`.
    fn quartic(&self, nu: &Real) -> Real {
        let two_r_cos = self.modulus.mul_int(2) * self.phase.cos();
        nu * nu - two_r_cos * nu + &self.modulus * &self.modulus
    }

    pub fn xi(&self, nu: &Real) -> Real {
        self.quartic(nu).sqrt().sqrt()
    }

    pub fn log_xi(&self, nu: &Real) -> Real {
        self.quartic(nu).ln().div_int(4)
    }

    /// `xi(nu)^s` in closed form.
    pub fn xi_pow(&self, nu: &Real, s: (i64, i64)) -> Real {
        let e = Real::from_ratio(s.0, 4 * s.1, self.precision());
        self.quartic(nu).powf(&e)
    }

    /// `u = xi^4 / R^2 = 1 + u1 nu + u2 nu^2`.
    fn u_coeffs(&self) -> (Real, Real) {
        let u1 = -(self.phase.cos().mul_int(2) / &self.modulus);
        let u2 = Real::one(self.precision()) / (&self.modulus * &self.modulus);
        (u1, u2)
    }
}

/// Maclaurin coefficients of `xi(nu)^s` through `len` terms.
///
/// `xi^s = R^(s/2) u^(s/4)`; the power of the quadratic `u` follows
/// `n w_n = sum_{k=1,2} ((a+1) k - n) u_k w_{n-k}` with `a = s/4`.
pub fn xi_series(map: &XiMap, s: (i64, i64), len: usize) -> PowerSeries<Real> {
    let prec = map.precision();
    let (u1, u2) = map.u_coeffs();
    let a1 = Real::from_ratio(s.0 + 4 * s.1, 4 * s.1, prec);
    let mut w: Vec<Real> = Vec::with_capacity(len);
    for n in 0..len {
        if n == 0 {
            w.push(Real::one(prec));
            continue;
        }
        let nr = Real::from_int(n as i64, prec);
        let mut acc = (&a1 - &nr) * &u1 * &w[n - 1];
        if n >= 2 {
            acc = acc + (a1.mul_int(2) - &nr) * &u2 * &w[n - 2];
        }
        w.push(acc / nr);
    }
    let scale = map.modulus.powf(&Real::from_ratio(s.0, 2 * s.1, prec));
    PowerSeries::new(Variable::Nu, w.into_iter().map(|c| c * &scale).collect())
}

/// Maclaurin coefficients of `log xi(nu) = log(R)/2 + log(u)/4`.
pub fn log_xi_series(map: &XiMap, len: usize) -> PowerSeries<Real> {
    let prec = map.precision();
    let (u1, u2) = map.u_coeffs();
    let u = |k: usize| match k {
        1 => u1.clone(),
        2 => u2.clone(),
        _ => Real::zero(prec),
    };
    // n L_n = n u_n - sum_{k=1}^{n-1} k L_k u_{n-k}
    let mut l: Vec<Real> = vec![Real::zero(prec)];
    for n in 1..len {
        let mut acc = u(n).mul_int(n as i64);
        for (k, lk) in l.iter().enumerate().take(n).skip(n.saturating_sub(2).max(1)) {
            acc = acc - lk.mul_int(k as i64) * u(n - k);
        }
        l.push(acc.div_int(n as i64));
    }
    let mut out: Vec<Real> = l.into_iter().map(|c| c.div_int(4)).collect();
    if let Some(c0) = out.first_mut() {
        *c0 = map.modulus.ln().div_int(2);
    }
    PowerSeries::new(Variable::Nu, out)
}

/// Cauchy product truncated to `len` terms.
pub(crate) fn mul_series(a: &[Real], b: &[Real], len: usize) -> Vec<Real> {
    let prec = a.first().or(b.first()).map(Real::precision).unwrap_or(Precision::from_digits(30));
    (0..len)
        .map(|n| {
            let mut acc = Real::zero(prec);
            for (i, ai) in a.iter().enumerate().take(n + 1) {
                if let Some(bj) = b.get(n - i) {
                    acc.add_product(ai, bj);
                }
            }
            acc
        })
        .collect()
}
