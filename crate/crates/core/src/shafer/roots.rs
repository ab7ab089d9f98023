use crate::error::{Error, Result};
use crate::real::{Complex, Precision, Real};
use crate::shafer::poly::Poly;

/// Iteration cap of the simultaneous Aberth-Ehrlich sweep.
pub const MAX_ITERATIONS: usize = 200;

/// Newton polishing passes applied after the sweep.
const POLISH_STEPS: usize = 3;

/// Roots of a polynomial with a per-root convergence flag.
#[derive(Debug, Clone)]
pub struct Roots {
    pub roots: Vec<Complex>,
    pub converged: Vec<bool>,
}

impl Roots {
    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    /// The roots, or an error naming how many failed to converge.
    pub fn into_converged(self) -> Result<Vec<Complex>> {
        let failed = self.converged.iter().filter(|&&c| !c).count();
        if failed > 0 {
            return Err(Error::NoConvergence(format!("{failed} of {} roots", self.roots.len())));
        }
        Ok(self.roots)
    }
}

/// All complex roots by Aberth-Ehrlich iteration followed by Newton polish.
///
/// Starting points lie on circles whose radii come from the upper convex hull
/// of `(i, log|c_i|)`, with fixed angular offsets so the run is deterministic. A root is accepted when
/// `|p(r)| / (|p'(r)| |r|) < 10^(-digits/2)`.
pub fn poly_roots(p: &Poly, digits: u32) -> Result<Roots> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::Precondition("root finding needs degree at least 1".into()));
    }
    let prec = p.precision().max(Precision::from_digits(digits));
    let p = Poly::new(p.coeffs().iter().map(|c| c.with_precision(prec)).collect());
    let tol = -(digits as f64) / 2.0;

    let mut z = initial_guesses(&p, prec);

    let mut done = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (v, dv) = p.evaluate_with_derivative(&z[i]);
            if v.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = &v / &dv;
            if converged(&p, &v, &dv, &z[i], tol) {
                done[i] = true;
            }
            let mut repulsion = Complex::zero(prec);
            for j in 0..n {
                if j != i {
                    repulsion = &repulsion + &(&z[i] - &z[j]).recip();
                }
            }
            let one = Complex::from_real(Real::one(prec));
            let step = &ratio / &(&one - &(&ratio * &repulsion));
            z[i] = &z[i] - &step;
        }
        if done.iter().all(|&d| d) {
            break;
        }
    }
    let mut flags = vec![false; n];
    for (i, zi) in z.iter_mut().enumerate() {
        for _ in 0..POLISH_STEPS {
            let (v, dv) = p.evaluate_with_derivative(zi);
            if v.is_zero() || dv.is_zero() {
                break;
            }
            *zi = &*zi - &(&v / &dv);
        }
        let (v, dv) = p.evaluate_with_derivative(zi);
        flags[i] = v.is_zero() || converged(&p, &v, &dv, zi, tol);
    }
    Ok(Roots { roots: z, converged: flags })
}

/// Newton-polygon initial approximations: each hull edge from `i` to `j`
/// contributes `j - i` points on the circle of radius `|c_i / c_j|^(1/(j-i))`.
fn initial_guesses(p: &Poly, prec: Precision) -> Vec<Complex> {
    let n = p.degree();
    let logs: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { c.log10_abs() })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in (0..=n).filter(|&i| logs[i].is_finite()) {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or below the chord from a to i
            let cross = (b - a) as f64 * (logs[i] - logs[a]) - (i - a) as f64 * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let two_pi = std::f64::consts::TAU;
    let mut z = Vec::with_capacity(n);
    // zero low-order coefficients mean roots at the origin
    for _ in 0..hull[0] {
        z.push(Complex::zero(prec));
    }
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let log_r = (logs[i] - logs[j]) / m as f64;
        let r = Real::from_f64(10f64.powf(log_r.clamp(-300.0, 300.0)), prec);
        for k in 0..m {
            let angle = two_pi * k as f64 / m as f64 + two_pi * i as f64 / n as f64 + 0.4;
            z.push(Complex::from_polar(&r, &Real::from_f64(angle, prec)));
        }
    }
    z
}

/// Relative Newton step below `10^tol`, or a backward error (residual over
/// `sum |c_i| |z|^i`) below `10^(1.5 tol)`; the latter accepts clustered roots
/// that stall at the rounding floor.
fn converged(p: &Poly, v: &Complex, dv: &Complex, z: &Complex, tol: f64) -> bool {
    let lv = v.log10_abs();
    if !dv.is_zero() {
        let scale = z.log10_abs().max(-300.0);
        if lv - dv.log10_abs() - scale < tol {
            return true;
        }
    }
    lv - abs_sum_log10(p, z) < 1.5 * tol
}

/// `log10 sum |c_i| |z|^i`.
fn abs_sum_log10(p: &Poly, z: &Complex) -> f64 {
    let lz = if z.is_zero() { f64::NEG_INFINITY } else { z.log10_abs() };
    let terms: Vec<f64> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c.log10_abs() + if i == 0 { 0.0 } else { i as f64 * lz })
        .collect();
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    top + terms.iter().map(|t| 10f64.powf(t - top)).sum::<f64>().log10()
}
