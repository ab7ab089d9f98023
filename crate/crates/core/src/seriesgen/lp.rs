use crate::error::{Error, Result};
use crate::seriesgen::trig::TrigPoly;
use crate::scalar::Scalar;

/// Minimum significant digits a determined coefficient may retain.
const MIN_DIGITS: f64 = 10.0;

/// Incremental supplier of the order-by-order coefficients of `y^3`.
///
/// The recursion pushes each new `y_m` without its (still unknown) `cos tau`
/// amplitude and later reports that amplitude through [`shift_last`].
///
/// [`shift_last`]: CubicEngine::shift_last
pub trait CubicEngine<T: Scalar>: Send {
    /// Appends `y_m` and returns the Fourier coefficients of `[y^3]_m`.
    fn push(&mut self, y: &TrigPoly<T>) -> Result<TrigPoly<T>>;
    /// Adds `a cos tau` to the most recently pushed `y_m`.
    fn shift_last(&mut self, a: &T);
}

/// Coefficient types able to drive the recursion.
pub trait LpScalar: Scalar {
    /// Engine sized for orders up to `max_order` (it may grow past that).
    fn cubic_engine(ctx: Self::Ctx, max_order: usize) -> Box<dyn CubicEngine<Self>>;
}

/// Lindstedt-Poincare recursion state for
/// `Omega^2 y'' + y = mu Omega (y' - (y^3)'/3)`.
///
/// At order `n` the frequencies `omega_0..=omega_n` are known, the amplitudes
/// `a_0..a_{n-1}` are pinned and `a_n` is pending: it is fixed by the
/// `sin tau` secularity condition of order `n + 1`.
pub struct LpState<T: LpScalar> {
    omega: Vec<T>,
    amp: Vec<T>,
    /// `s_n`, coefficients of `Omega^2`.
    s: Vec<T>,
    ys: Vec<TrigPoly<T>>,
    /// `w_m = y_m' - [y^3]_m' / 3`.
    ws: Vec<TrigPoly<T>>,
    engine: Box<dyn CubicEngine<T>>,
    ctx: T::Ctx,
    closed: bool,
}

/// One step's forcing with the bookkeeping for the cancellation check.
struct Forcing<T> {
    f: TrigPoly<T>,
    /// Largest `log10` magnitude among the terms summed into `cos tau`, `sin tau`.
    peak_c1: f64,
    peak_s1: f64,
}

impl<T: LpScalar> LpState<T> {
    /// Order-0 state: `Omega = 1`, `y_0 = a_0 cos tau`.
    ///
    /// The order-1 `sin tau` condition `a_0 (a_0^2 - 4) / 4 = 0` is cubic in
    /// `a_0`; the nontrivial positive root `a_0 = 2` is taken here.
    pub fn new(ctx: T::Ctx, max_order: usize) -> Result<Self> {
        let mut engine = T::cubic_engine(ctx, max_order);
        let a0 = T::from_int(2, ctx);
        let y0 = TrigPoly::cos_term(1, a0.clone());
        let c0 = engine.push(&y0)?;
        let w0 = cubic_to_w(&y0, &c0);
        Ok(LpState {
            omega: vec![T::from_int(1, ctx)],
            amp: vec![a0],
            s: vec![T::from_int(1, ctx)],
            ys: vec![y0],
            ws: vec![w0],
            engine,
            ctx,
            closed: true,
        })
    }

    pub fn order(&self) -> usize {
        self.omega.len() - 1
    }

    /// `omega_0..=omega_n`.
    pub fn omega(&self) -> &[T] {
        &self.omega
    }

    /// Pinned amplitudes; `a_n` appears once the next order fixes it.
    pub fn amplitude(&self) -> &[T] {
        &self.amp
    }

    /// `y_0..=y_n`; `y_n` lacks its pending `a_n cos tau` term until pinned.
    pub fn solutions(&self) -> &[TrigPoly<T>] {
        &self.ys
    }

    /// Whether `a_n` of the current order is already pinned.
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Extends the solution to order `n + 1`.
    pub fn step(&mut self) -> Result<()> {
        let n = self.order();
        let next = n + 1;
        let forcing = self.forcing(next);
        let mut f = self.pin_amplitude(forcing).map_err(|e| at_order(n, e))?;

        // cos tau condition: F_c1 + 2 a_0 omega_{n+1} = 0.
        let a0 = self.amp[0].clone();
        let c1 = f.f.cos_coeff(1).cloned().unwrap_or_else(|| T::zero(self.ctx));
        let omega_next = -(c1.clone() / (a0.scale_int(2)));
        if next.is_multiple_of(2) {
            check_digits(&omega_next, f.peak_c1, next).map_err(|e| at_order(next, e))?;
        }
        let mut s_next = omega_next.scale_int(2);
        for k in 1..next {
            s_next = s_next + self.omega[k].clone() * &self.omega[next - k];
        }
        f.f.cos_mut()[1] = T::zero(self.ctx);
        f.f.sin_mut()[1] = T::zero(self.ctx);

        let y = particular_solution(&f.f, self.ctx);
        let c = self.engine.push(&y).map_err(|e| at_order(next, e))?;
        self.ws.push(cubic_to_w(&y, &c));
        self.ys.push(y);
        self.omega.push(omega_next);
        self.s.push(s_next);
        self.closed = false;
        Ok(())
    }

    /// Pins the pending `a_n` without building order `n + 1`.
    pub fn close(&mut self) -> Result<()> {
        if self.closed {
            return Ok(());
        }
        let n = self.order();
        let forcing = self.forcing(n + 1);
        self.pin_amplitude(forcing).map_err(|e| at_order(n, e))?;
        Ok(())
    }

    /// Order-`m` forcing `F` of `y_m'' + y_m = F`, omitting the unknown
    /// `2 omega_m a_0 cos tau` and with the pending `a_{m-1}` set to zero.
    fn forcing(&self, m: usize) -> Forcing<T> {
        let ctx = self.ctx;
        let mut f = TrigPoly::zero(2 * m + 1, ctx);
        let mut peak_c1 = f64::NEG_INFINITY;
        let mut peak_s1 = f64::NEG_INFINITY;
        let track = |factor: &T, p: &TrigPoly<T>, c1: &mut f64, s1: &mut f64| {
            let lf = factor.log10_abs();
            if let Some(c) = p.cos_coeff(1) {
                *c1 = c1.max(lf + c.log10_abs());
            }
            if let Some(s) = p.sin_coeff(1) {
                *s1 = s1.max(lf + s.log10_abs());
            }
        };
        for k in 0..m {
            let w = &self.ws[m - 1 - k];
            if self.omega[k].is_zero() {
                continue;
            }
            track(&self.omega[k], w, &mut peak_c1, &mut peak_s1);
            f.add_scaled(&self.omega[k], w);
        }
        for k in 1..m {
            if self.s[k].is_zero() {
                continue;
            }
            let ypp = self.ys[m - k].second_derivative();
            let neg = -self.s[k].clone();
            track(&neg, &ypp, &mut peak_c1, &mut peak_s1);
            f.add_scaled(&neg, &ypp);
        }
        // known part of s_m = 2 omega_m + sum_{k=1}^{m-1} omega_k omega_{m-k}
        let mut s_known = T::zero(ctx);
        for k in 1..m {
            s_known = s_known + self.omega[k].clone() * &self.omega[m - k];
        }
        if !s_known.is_zero() {
            let term = s_known * &self.amp[0];
            peak_c1 = peak_c1.max(term.log10_abs());
            f.cos_mut()[1] = f.cos_mut()[1].clone() + term;
        }
        Forcing { f, peak_c1, peak_s1 }
    }

    /// Fixes the pending `a_{m-1}` from the `sin tau` condition of the
    /// order-`m` forcing and folds its contribution into the forcing.
    fn pin_amplitude(&mut self, mut forcing: Forcing<T>) -> Result<Forcing<T>> {
        if self.closed {
            return Ok(forcing);
        }
        let n = self.order();
        let ctx = self.ctx;
        let a0 = &self.amp[0];
        // d/da_n of the sin tau coefficient: 3 a_0^2 / 4 - 1.
        let lin = a0.clone() * a0 * T::from_ratio(3, 4, ctx) - T::from_int(1, ctx);
        let s1 = forcing.f.sin_coeff(1).cloned().unwrap_or_else(|| T::zero(ctx));
        let a_n = -(s1 / &lin);
        if n.is_multiple_of(2) {
            check_digits(&a_n, forcing.peak_s1, n)?;
        }

        // a_n cos tau in y_n shifts w_n by a_n (2 sin tau + 3 sin 3 tau) at a_0 = 2.
        let shift = linear_w_shift(a0, ctx);
        self.ws[n].add_scaled(&a_n, &shift);
        forcing.f.add_scaled(&a_n, &shift);
        if !self.s[1].is_zero() {
            let t = self.s[1].clone() * &a_n;
            forcing.f.cos_mut()[1] = forcing.f.cos_mut()[1].clone() + t;
        }
        let mut y = std::mem::replace(&mut self.ys[n], TrigPoly::zero(0, ctx));
        y.resize(1);
        y.cos_mut()[1] = y.cos_mut()[1].clone() + &a_n;
        self.ys[n] = y;
        self.engine.shift_last(&a_n);
        self.amp.push(a_n);
        self.closed = true;
        Ok(forcing)
    }
}

/// Response of `w = y' - (y^3)'/3` to `y_n -> y_n + cos tau` around
/// `y_0 = a_0 cos tau`.
fn linear_w_shift<T: Scalar>(a0: &T, ctx: T::Ctx) -> TrigPoly<T> {
    // 3 y_0^2 cos tau = (3 a_0^2 / 4)(3 cos tau + cos 3 tau)
    let q = a0.clone() * a0 * T::from_ratio(3, 4, ctx);
    let cubic = TrigPoly::from_parts(
        vec![T::zero(ctx), q.scale_int(3), T::zero(ctx), q],
        Vec::new(),
        ctx,
    );
    let y = TrigPoly::cos_term(1, T::from_int(1, ctx));
    cubic_to_w(&y, &cubic)
}

fn cubic_to_w<T: Scalar>(y: &TrigPoly<T>, cube: &TrigPoly<T>) -> TrigPoly<T> {
    let ctx = y.cos_coeffs()[0].ctx();
    let mut w = y.derivative();
    w.add_scaled(&T::from_ratio(-1, 3, ctx), &cube.derivative());
    w
}

/// Solves `y'' + y = f` harmonic by harmonic with `y(0) = 0`, `y'(0) = 0`;
/// `f` must carry no `cos tau`, `sin tau` terms.
fn particular_solution<T: Scalar>(f: &TrigPoly<T>, ctx: T::Ctx) -> TrigPoly<T> {
    let h = f.degree().max(1);
    let mut y = TrigPoly::zero(h, ctx);
    let mut cos_sum = T::zero(ctx);
    let mut slope = T::zero(ctx);
    for k in (0..=h).filter(|&k| k != 1) {
        let d = 1 - (k * k) as i64;
        let c = &f.cos_coeffs()[k];
        if !c.is_zero() {
            let v = c.clone() / T::from_int(d, ctx);
            cos_sum = cos_sum + &v;
            y.cos_mut()[k] = v;
        }
        if k >= 2 {
            let s = &f.sin_coeffs()[k - 1];
            if !s.is_zero() {
                let v = s.clone() / T::from_int(d, ctx);
                slope = slope + v.scale_int(k as i64);
                y.sin_mut()[k] = v;
            }
        }
    }
    y.cos_mut()[1] = -cos_sum;
    y.sin_mut()[1] = -slope;
    y
}

fn check_digits<T: Scalar>(value: &T, peak: f64, order: usize) -> Result<()> {
    let Some(p) = value.working_digits() else {
        return Ok(());
    };
    let digits = if value.is_zero() {
        f64::NEG_INFINITY
    } else {
        p as f64 - (peak - value.log10_abs()).max(0.0)
    };
    if digits < MIN_DIGITS {
        return Err(Error::PrecisionLoss { order, digits });
    }
    Ok(())
}

fn at_order(order: usize, e: Error) -> Error {
    match e {
        Error::AtOrder { .. } => e,
        other => Error::AtOrder { order, source: Box::new(other) },
    }
}
