use crate::real::Real;
use crate::scalar::Scalar;

/// Finite Fourier sum `sum_k cos_k cos(k tau) + sin_k sin(k tau)` for
/// `k = 0..=H`.
///
/// `sin[0]` is stored for indexing convenience and is always zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPoly<T> {
    cos: Vec<T>,
    sin: Vec<T>,
}

impl<T: Scalar> TrigPoly<T> {
    pub fn zero(max_harmonic: usize, ctx: T::Ctx) -> Self {
        TrigPoly {
            cos: vec![T::zero(ctx); max_harmonic + 1],
            sin: vec![T::zero(ctx); max_harmonic + 1],
        }
    }

    /// Builds from cosine coefficients `k = 0..` and sine coefficients
    /// `k = 1..` (the sine list has no `k = 0` slot).
    pub fn from_parts(cos: Vec<T>, sin_from_one: Vec<T>, ctx: T::Ctx) -> Self {
        let h = cos.len().max(sin_from_one.len() + 1).max(1) - 1;
        let mut p = TrigPoly::zero(h, ctx);
        for (k, c) in cos.into_iter().enumerate() {
            p.cos[k] = c;
        }
        for (k, s) in sin_from_one.into_iter().enumerate() {
            p.sin[k + 1] = s;
        }
        p
    }

    /// `amplitude * cos(k tau)`.
    pub fn cos_term(k: usize, amplitude: T) -> Self {
        let mut p = TrigPoly::zero(k, amplitude.ctx());
        p.cos[k] = amplitude;
        p
    }

    pub fn max_harmonic(&self) -> usize {
        self.cos.len() - 1
    }

    /// Highest harmonic carrying a nonzero coefficient.
    pub fn degree(&self) -> usize {
        (0..self.cos.len())
            .rev()
            .find(|&k| !self.cos[k].is_zero() || !self.sin[k].is_zero())
            .unwrap_or(0)
    }

    pub fn cos_coeff(&self, k: usize) -> Option<&T> {
        self.cos.get(k)
    }

    pub fn sin_coeff(&self, k: usize) -> Option<&T> {
        if k == 0 {
            return None;
        }
        self.sin.get(k)
    }

    pub fn cos_coeffs(&self) -> &[T] {
        &self.cos
    }

    /// Sine coefficients for `k = 1..=H`.
    pub fn sin_coeffs(&self) -> &[T] {
        &self.sin[1..]
    }

    pub(crate) fn cos_mut(&mut self) -> &mut [T] {
        &mut self.cos
    }

    pub(crate) fn sin_mut(&mut self) -> &mut [T] {
        &mut self.sin
    }

    /// Grows the harmonic range with zero coefficients.
    pub fn resize(&mut self, max_harmonic: usize) {
        let ctx = self.cos[0].ctx();
        if max_harmonic + 1 > self.cos.len() {
            self.cos.resize(max_harmonic + 1, T::zero(ctx));
            self.sin.resize(max_harmonic + 1, T::zero(ctx));
        }
    }

    pub fn derivative(&self) -> Self {
        let ctx = self.cos[0].ctx();
        let mut d = TrigPoly::zero(self.max_harmonic(), ctx);
        for k in 1..self.cos.len() {
            let kk = k as i64;
            if !self.sin[k].is_zero() {
                d.cos[k] = self.sin[k].scale_int(kk);
            }
            if !self.cos[k].is_zero() {
                d.sin[k] = self.cos[k].scale_int(-kk);
            }
        }
        d
    }

    pub fn second_derivative(&self) -> Self {
        let ctx = self.cos[0].ctx();
        let mut d = TrigPoly::zero(self.max_harmonic(), ctx);
        for k in 1..self.cos.len() {
            let kk = -((k * k) as i64);
            if !self.cos[k].is_zero() {
                d.cos[k] = self.cos[k].scale_int(kk);
            }
            if !self.sin[k].is_zero() {
                d.sin[k] = self.sin[k].scale_int(kk);
            }
        }
        d
    }

    /// `self += factor * other`, skipping zero coefficients of `other`.
    pub fn add_scaled(&mut self, factor: &T, other: &TrigPoly<T>) {
        if factor.is_zero() {
            return;
        }
        self.resize(other.max_harmonic());
        for k in 0..other.cos.len() {
            if !other.cos[k].is_zero() {
                let t = factor.clone() * &other.cos[k];
                self.cos[k] = self.cos[k].clone() + t;
            }
            if !other.sin[k].is_zero() {
                let t = factor.clone() * &other.sin[k];
                self.sin[k] = self.sin[k].clone() + t;
            }
        }
    }

    pub fn add_assign(&mut self, other: &TrigPoly<T>) {
        self.resize(other.max_harmonic());
        for k in 0..other.cos.len() {
            if !other.cos[k].is_zero() {
                self.cos[k] = self.cos[k].clone() + &other.cos[k];
            }
            if !other.sin[k].is_zero() {
                self.sin[k] = self.sin[k].clone() + &other.sin[k];
            }
        }
    }

    /// Value at `tau = 0`, the sum of the cosine coefficients.
    pub fn value_at_zero(&self) -> T {
        let ctx = self.cos[0].ctx();
        self.cos.iter().fold(T::zero(ctx), |acc, c| acc + c)
    }

    /// Derivative at `tau = 0`, `sum_k k sin_k`.
    pub fn slope_at_zero(&self) -> T {
        let ctx = self.cos[0].ctx();
        self.sin
            .iter()
            .enumerate()
            .skip(1)
            .fold(T::zero(ctx), |acc, (k, s)| acc + s.scale_int(k as i64))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TrigPoly<U> {
        TrigPoly {
            cos: self.cos.iter().map(&f).collect(),
            sin: self.sin.iter().map(&f).collect(),
        }
    }
}

impl TrigPoly<Real> {
    pub fn evaluate(&self, tau: &Real) -> Real {
        let mut acc = Real::zero(tau.precision());
        for k in 0..self.cos.len() {
            let arg = tau.mul_int(k as i64);
            if !self.cos[k].is_zero() {
                acc = acc + &self.cos[k] * arg.cos();
            }
            if !self.sin[k].is_zero() {
                acc = acc + &self.sin[k] * arg.sin();
            }
        }
        acc
    }
}
