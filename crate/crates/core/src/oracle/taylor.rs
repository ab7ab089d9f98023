use crate::error::{Error, Result};
use crate::real::{Precision, Real};

/// Endpoint of an integration together with its step count.
#[derive(Debug, Clone)]
pub struct Endpoint {
    pub x: Real,
    pub v: Real,
    pub steps: usize,
}

/// Smallest accepted step relative to the elapsed time.
const MIN_STEP: f64 = 1e-40;

/// Taylor order for a per-step tolerance of `10^-digits`.
fn order_for(digits: f64) -> usize {
    (1.15 * digits).ceil() as usize + 2
}

/// Taylor coefficients of `x` and `v = x'` at the current point for
/// `x'' + x = mu x' (1 - x^2)`.
fn coefficients(mu: &Real, x0: &Real, v0: &Real, order: usize) -> (Vec<Real>, Vec<Real>) {
    let prec = x0.precision();
    let mut x = Vec::with_capacity(order + 1);
    let mut v = Vec::with_capacity(order + 1);
    // s = x^2, w = v s
    let mut s: Vec<Real> = Vec::with_capacity(order + 1);
    let mut w: Vec<Real> = Vec::with_capacity(order + 1);
    x.push(x0.clone());
    v.push(v0.clone());
    for k in 0..order {
        let mut sk = Real::zero(prec);
        for i in 0..=k {
            sk.add_product(&x[i], &x[k - i]);
        }
        s.push(sk);
        let mut wk = Real::zero(prec);
        for i in 0..=k {
            wk.add_product(&v[i], &s[k - i]);
        }
        w.push(wk);
        let kk = (k + 1) as i64;
        x.push(v[k].div_int(kk));
        let rhs = mu * &(&v[k] - &w[k]) - &x[k];
        v.push(rhs.div_int(kk));
    }
    (x, v)
}

fn horner(c: &[Real], h: &Real) -> Real {
    c.iter().rev().fold(Real::zero(h.precision()), |acc, ck| acc * h + ck)
}

/// Step from the decay of the two highest coefficients (Jorba-Zou).
fn step_size(x: &[Real], v: &[Real], tol_log10: f64, scale_log10: f64) -> f64 {
    let n = x.len() - 1;
    let mag = |k: usize| x[k].log10_abs().max(v[k].log10_abs()) - scale_log10;
    let rho = |k: usize| {
        let m = mag(k);
        if m.is_finite() {
            10f64.powf((tol_log10 - m) / k as f64)
        } else {
            f64::INFINITY
        }
    };
    rho(n - 1).min(rho(n))
}

/// Integrates `x'' + x = mu x' (1 - x^2)` from `(x0, v0)` over `t_span`
/// (either sign) with a per-step tolerance `10^-digits`.
pub fn integrate(mu: &Real, x0: &Real, v0: &Real, t_span: &Real, digits: u32) -> Result<Endpoint> {
    let mut st = Stepper::new(mu, x0, v0, digits)?;
    let backward = t_span.is_negative();
    let total = t_span.with_precision(st.prec).abs();
    while st.t < total {
        let (cx, cv, h) = st.propose(backward)?;
        let remaining = &total - &st.t;
        let last = h >= remaining;
        let h = if last { remaining } else { h };
        st.advance(&cx, &cv, h, backward);
        if last {
            st.t = total.clone();
        }
    }
    Ok(st.endpoint())
}

/// First return of the orbit from `(a, 0)` to `x' = 0` with `x'` changing
/// sign from positive to non-positive, i.e. the next maximum of `x`.
#[derive(Debug, Clone)]
pub struct Return {
    pub time: Real,
    pub x: Real,
    pub steps: usize,
}

/// Integrates from `(a, 0)` up to the next maximum of `x`; the crossing is
/// located inside the last step by Newton iteration on its Taylor polynomial.
pub fn first_return(mu: &Real, a: &Real, digits: u32, t_max: f64) -> Result<Return> {
    let zero = Real::zero(a.precision());
    let mut st = Stepper::new(mu, a, &zero, digits)?;
    let t_max = Real::from_f64(t_max, st.prec);
    while st.t < t_max {
        let (cx, cv, h) = st.propose(false)?;
        let v_end = horner(&cv, &h);
        if !st.v.is_negative() && !st.v.is_zero() && (v_end.is_negative() || v_end.is_zero()) {
            let s = crossing(&cv, &h, digits);
            let x = horner(&cx, &s);
            let out = Precision::from_digits(digits);
            return Ok(Return {
                time: (&st.t + &s).with_precision(out),
                x: x.with_precision(out),
                steps: st.steps + 1,
            });
        }
        st.advance(&cx, &cv, h, false);
    }
    Err(Error::NoConvergence(format!("no return to x' = 0 before t = {}", t_max.to_f64())))
}

/// Root of the Taylor polynomial `cv` in `(0, h]` given a sign change.
fn crossing(cv: &[Real], h: &Real, digits: u32) -> Real {
    let prec = h.precision();
    let (mut lo, mut hi) = (Real::zero(prec), h.clone());
    let dcv: Vec<Real> = cv.iter().enumerate().skip(1).map(|(k, c)| c.mul_int(k as i64)).collect();
    let v0 = cv[0].clone();
    let v1 = horner(cv, h);
    let mut s = &v0 / (&v0 - &v1) * h;
    let target = -(digits as f64) - 5.0;
    for _ in 0..200 {
        let f = horner(cv, &s);
        if f.is_zero() {
            break;
        }
        if f.is_negative() {
            hi = s.clone();
        } else {
            lo = s.clone();
        }
        let df = horner(&dcv, &s);
        let next = if df.is_zero() { None } else { Some(&s - &(f / df)) };
        let next = match next {
            Some(n) if n > lo && n < hi => n,
            _ => (&lo + &hi).div_int(2),
        };
        let done = (&next - &s).abs().log10_abs() - h.log10_abs() < target;
        s = next;
        if done {
            break;
        }
    }
    s
}

struct Stepper {
    prec: Precision,
    mu: Real,
    x: Real,
    v: Real,
    t: Real,
    steps: usize,
    order: usize,
    tol: f64,
    digits: u32,
}

impl Stepper {
    fn new(mu: &Real, x0: &Real, v0: &Real, digits: u32) -> Result<Stepper> {
        if digits < 20 {
            return Err(Error::Precondition(format!("integration needs at least 20 digits, got {digits}")));
        }
        let prec = Precision::from_digits(digits + 10);
        Ok(Stepper {
            prec,
            mu: mu.with_precision(prec),
            x: x0.with_precision(prec),
            v: v0.with_precision(prec),
            t: Real::zero(prec),
            steps: 0,
            order: order_for(digits as f64),
            tol: -(digits as f64) - 2.0,
            digits,
        })
    }

    /// Taylor coefficients at the current point and a signed step.
    fn propose(&self, backward: bool) -> Result<(Vec<Real>, Vec<Real>, Real)> {
        let (cx, cv) = coefficients(&self.mu, &self.x, &self.v, self.order);
        let scale = self.x.log10_abs().max(self.v.log10_abs()).max(0.0);
        let h = step_size(&cx, &cv, self.tol, scale);
        let reached = self.t.to_f64();
        if h.is_nan() || h <= MIN_STEP * reached.abs().max(1.0) {
            return Err(Error::StepUnderflow { t_reached: if backward { -reached } else { reached } });
        }
        Ok((cx, cv, Real::from_f64(h, self.prec)))
    }

    /// Moves by `h >= 0` in the chosen direction.
    fn advance(&mut self, cx: &[Real], cv: &[Real], h: Real, backward: bool) {
        let hs = if backward { -&h } else { h.clone() };
        self.x = horner(cx, &hs);
        self.v = horner(cv, &hs);
        self.t = &self.t + &h;
        self.steps += 1;
    }

    fn endpoint(&self) -> Endpoint {
        let out = Precision::from_digits(self.digits);
        Endpoint { x: self.x.with_precision(out), v: self.v.with_precision(out), steps: self.steps }
    }
}
