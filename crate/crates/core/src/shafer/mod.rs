//! Quadratic Hermite-Pade (Shafer) approximants and branch-point location.
//!
//! A truncated series `f` in `nu` is matched by polynomials `P`, `Q`, `R`
//! with `P f^2 + Q f + R = O(nu^(K+L+M+2))`. The approximant branches where
//! the discriminant `Q^2 - 4 P R` vanishes; zeros that stay put as the order
//! grows mark genuine singularities of `f`.

mod poly;
mod roots;

use std::collections::BTreeMap;
use std::fmt::Write as _;

pub use poly::Poly;
pub use roots::{poly_roots, Roots, MAX_ITERATIONS};

use crate::error::{Error, Result};
use crate::linalg::solve_full_pivot;
use crate::real::{Complex, Precision, Real};
use crate::resum::pade;
use crate::seriesgen::{PowerSeries, MIN_FLOAT_DIGITS};

/// Default absolute tolerance on root movement between consecutive orders.
pub const DEFAULT_PERSISTENCE_TOL: f64 = 1e-8;

/// Segments of the straight path used for analytic continuation.
const CONTINUATION_SEGMENTS: usize = 64;

/// Smallest continuation step, as a fraction of the whole path.
const MIN_CONTINUATION_STEP: f64 = 1e-9;

/// Which constant term was pinned to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    QConstant,
    PConstant,
}

/// Root choice of `(-Q + s sqrt(Q^2 - 4PR)) / (2P)`, `s = +1` or `-1`, with
/// the principal square root at `nu = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchSign {
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
pub struct ShaferApproximant {
    pub p: Poly,
    pub q: Poly,
    pub r: Poly,
    /// `(K, L, M)` as requested; trimming may lower the stored degrees.
    pub degrees: (usize, usize, usize),
    pub normalization: Normalization,
    sign: Option<BranchSign>,
}

/// Builds `P f^2 + Q f + R = O(nu^(K+L+M+2))`, pinning `Q(0) = 1` and
/// falling back to `P(0) = 1` when that system is singular.
pub fn build_shafer(series: &PowerSeries<Real>, k: usize, l: usize, m: usize) -> Result<ShaferApproximant> {
    match build_shafer_with(series, k, l, m, Normalization::QConstant) {
        Err(Error::Singular(_)) => build_shafer_with(series, k, l, m, Normalization::PConstant),
        other => other,
    }
}

/// [`build_shafer`] with a fixed normalization.
pub fn build_shafer_with(
    series: &PowerSeries<Real>,
    k: usize,
    l: usize,
    m: usize,
    normalization: Normalization,
) -> Result<ShaferApproximant> {
    let rows = k + l + m + 2;
    if series.len() < rows {
        return Err(Error::InsufficientCoefficients { needed: rows, available: series.len() });
    }
    let prec = series.precision();
    if prec.digits() < MIN_FLOAT_DIGITS {
        return Err(Error::Precondition(format!("Shafer approximants need at least {MIN_FLOAT_DIGITS} digits")));
    }
    let f = &series.coeffs()[..rows];
    let mut f2 = vec![Real::zero(prec); rows];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in f[..rows - i].iter().enumerate() {
            f2[i + j].add_product(a, b);
        }
    }
    let zero = Real::zero(prec);
    let at = |v: &[Real], i: isize| if i < 0 { zero.clone() } else { v[i as usize].clone() };

    // columns: p_0..p_K, q_0..q_L, r_0..r_M with the pinned one removed
    let pinned = match normalization {
        Normalization::PConstant => 0,
        Normalization::QConstant => k + 1,
    };
    let mut a = Vec::with_capacity(rows);
    let mut b = Vec::with_capacity(rows);
    for n in 0..rows as isize {
        let mut row = Vec::with_capacity(rows + 1);
        row.extend((0..=k as isize).map(|i| at(&f2, n - i)));
        row.extend((0..=l as isize).map(|j| at(f, n - j)));
        row.extend((0..=m as isize).map(|j| if j == n { Real::one(prec) } else { zero.clone() }));
        let rhs = -row.remove(pinned);
        a.push(row);
        b.push(rhs);
    }
    let mut x = solve_full_pivot(a, b)?;
    x.insert(pinned, Real::one(prec));
    let r = x.split_off(k + l + 2);
    let q = x.split_off(k + 1);
    Ok(ShaferApproximant {
        p: Poly::new(x),
        q: Poly::new(q),
        r: Poly::new(r),
        degrees: (k, l, m),
        normalization,
        sign: None,
    })
}

/// Diagonal approximant with the series-matching branch selected.
pub fn fit_diagonal(series: &PowerSeries<Real>, k: usize) -> Result<ShaferApproximant> {
    let mut app = build_shafer(series, k, k, k)?;
    branch_select(&mut app, series)?;
    Ok(app)
}

/// `Q^2 - 4 P R`.
pub fn discriminant(app: &ShaferApproximant) -> Poly {
    app.q.mul(&app.q).sub(&app.p.mul(&app.r).scale(&Real::from_int(4, app.p.precision())))
}

/// Picks the root that reproduces the constant term of `series` and stores
/// it on the approximant.
pub fn branch_select(app: &mut ShaferApproximant, series: &PowerSeries<Real>) -> Result<BranchSign> {
    let prec = app.p.precision();
    let zero = Complex::zero(prec);
    let c0 = Complex::from_real(series.coeffs()[0].clone());
    let disc = discriminant(app).coeff(0);
    if disc.is_negative() {
        return Err(Error::NoMatchingBranch);
    }
    let s = Complex::from_real(disc.sqrt());
    let tol = -(prec.digits() as f64) / 2.0 + c0.log10_abs().max(0.0);
    let mut best: Option<(f64, BranchSign)> = None;
    for sign in [BranchSign::Plus, BranchSign::Minus] {
        let root = app.root_with(&zero, &signed(&s, sign));
        let err = (&root - &c0).log10_abs();
        if err < tol && best.is_none_or(|(e, _)| err < e) {
            best = Some((err, sign));
        }
    }
    let (_, sign) = best.ok_or(Error::NoMatchingBranch)?;
    app.sign = Some(sign);
    Ok(sign)
}

fn signed(s: &Complex, sign: BranchSign) -> Complex {
    match sign {
        BranchSign::Plus => s.clone(),
        BranchSign::Minus => -s,
    }
}

impl ShaferApproximant {
    pub fn sign(&self) -> Option<BranchSign> {
        self.sign
    }

    pub fn precision(&self) -> Precision {
        self.p.precision()
    }

    /// `(-Q + S) / (2P)` for a given square-root value `S`, in whichever of
    /// the two equivalent forms avoids cancellation.
    fn root_with(&self, nu: &Complex, s: &Complex) -> Complex {
        let p = self.p.evaluate_complex(nu);
        let q = self.q.evaluate_complex(nu);
        let plus = &(-&q) + s;
        let minus = &(-&q) - s;
        if plus.log10_abs() >= minus.log10_abs() {
            &plus / &(&p + &p)
        } else {
            let r = self.r.evaluate_complex(nu);
            &(&r + &r) / &minus
        }
    }

    /// Value of the selected branch at `nu`, continued along the segment
    /// from the origin.
    pub fn evaluate(&self, nu: &Complex) -> Result<Complex> {
        let sign = self.sign.ok_or_else(|| Error::Precondition("branch_select must run before evaluation".into()))?;
        let prec = self.precision();
        let disc = discriminant(self);
        let d0 = disc.coeff(0);
        if d0.is_zero() || d0.is_negative() {
            return Err(Error::BranchAmbiguity { re: 0.0, im: 0.0 });
        }
        let mut s = signed(&Complex::from_real(d0.sqrt()), sign);
        if nu.is_zero() {
            return Ok(self.root_with(nu, &s));
        }
        let base = 1.0 / CONTINUATION_SEGMENTS as f64;
        let (mut t, mut h) = (0.0f64, base);
        while t < 1.0 {
            let t_new = (t + h).min(1.0);
            let point = nu.scale(&Real::from_f64(t_new, prec));
            let cand = disc.evaluate_complex(&point).sqrt();
            let keep = (&cand - &s).log10_abs();
            let flip = (&cand + &s).log10_abs();
            // accept only a clear winner: the other choice is 2x farther
            if (keep - flip).abs() < std::f64::consts::LOG10_2 {
                h /= 2.0;
                if h < MIN_CONTINUATION_STEP {
                    return Err(Error::BranchAmbiguity { re: point.re.to_f64(), im: point.im.to_f64() });
                }
                continue;
            }
            s = if keep < flip { cand } else { -cand };
            t = t_new;
            h = (h * 2.0).min(base);
        }
        Ok(self.root_with(nu, &s))
    }

    pub fn evaluate_real(&self, nu: &Real) -> Result<Real> {
        Ok(self.evaluate(&Complex::from_real(nu.clone()))?.re)
    }

    /// Taylor coefficients of the selected branch through `len` terms.
    pub fn reexpand(&self, len: usize) -> Result<Vec<Real>> {
        let sign = self.sign.ok_or_else(|| Error::Precondition("branch_select must run before re-expansion".into()))?;
        let prec = self.precision();
        let zero = Real::zero(prec);
        let d0 = discriminant(self).coeff(0);
        let s = match sign {
            BranchSign::Plus => d0.sqrt(),
            BranchSign::Minus => -d0.sqrt(),
        };
        let g0 = self.root_with(&Complex::zero(prec), &Complex::from_real(s.clone())).re;
        // d/dg (P g^2 + Q g + R) at nu = 0 equals the signed square root
        let (p, q, r) = (self.p.coeffs(), self.q.coeffs(), self.r.coeffs());
        let mut g = vec![g0.clone()];
        let mut sq = vec![&g0 * &g0];
        for n in 1..len {
            // g^2 at order n without the unknown 2 g_0 g_n
            let mut sq_n = zero.clone();
            for i in 1..n {
                sq_n.add_product(&g[i], &g[n - i]);
            }
            let mut acc = r.get(n).cloned().unwrap_or_else(|| zero.clone());
            acc.add_product(&p[0], &sq_n);
            for (i, pi) in p.iter().enumerate().skip(1).take(n) {
                acc.add_product(pi, &sq[n - i]);
            }
            for (j, qj) in q.iter().enumerate().skip(1).take(n) {
                acc.add_product(qj, &g[n - j]);
            }
            let gn = -(acc / &s);
            sq_n.add_product(&g0.mul_int(2), &gn);
            sq.push(sq_n);
            g.push(gn);
        }
        g.truncate(len);
        Ok(g)
    }
}

/// [`ShaferApproximant::evaluate`] as a free function.
pub fn evaluate_shafer(app: &ShaferApproximant, nu: &Complex) -> Result<Complex> {
    app.evaluate(nu)
}

/// Per-root movement between consecutive orders.
#[derive(Debug, Clone)]
pub struct RootPersistence {
    pub roots: Vec<Complex>,
    /// `d_n = min_j |r_n - r'_j|` over the roots `r'` of the next order.
    pub distances: Vec<Real>,
    pub persistent: Vec<bool>,
}

impl RootPersistence {
    pub fn count(&self) -> usize {
        self.persistent.iter().filter(|&&p| p).count()
    }
}

/// Flags roots that move less than `tol` between orders `K` and `K + 1` and
/// returns the upper member of the smallest-modulus persistent conjugate pair.
pub fn persistence_filter(roots_k: &[Complex], roots_k1: &[Complex], tol: f64) -> Result<(RootPersistence, Complex)> {
    let log_tol = tol.log10();
    let distances: Vec<Real> = roots_k
        .iter()
        .map(|r| {
            roots_k1
                .iter()
                .map(|s| (r - s).abs())
                .min_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
                .expect("next-order roots are nonempty")
        })
        .collect();
    let persistent: Vec<bool> = distances.iter().map(|d| d.log10_abs() < log_tol).collect();
    let mut best: Option<Complex> = None;
    for (i, r) in roots_k.iter().enumerate() {
        if !persistent[i] || r.im.is_negative() || r.im.log10_abs() < log_tol {
            continue;
        }
        let partnered = roots_k
            .iter()
            .zip(&persistent)
            .any(|(s, &ok)| ok && (s - &r.conj()).log10_abs() < log_tol);
        if partnered && best.as_ref().is_none_or(|b| r.norm_sqr() < b.norm_sqr()) {
            best = Some(r.clone());
        }
    }
    let pair = best.ok_or(Error::NoPersistentPair)?;
    Ok((RootPersistence { roots: roots_k.to_vec(), distances, persistent }, pair))
}

/// Branch point `nu_+ = R e^(i phi)` estimated at diagonal order `K`.
#[derive(Debug, Clone)]
pub struct BranchPointEstimate {
    pub modulus: Real,
    /// In `(0, pi)`.
    pub phase: Real,
    pub order: usize,
    /// Distance to the estimate at the largest successful order.
    pub delta_modulus: Real,
    pub delta_phase: Real,
    pub persistence: RootPersistence,
}

impl BranchPointEstimate {
    pub fn from_polar(modulus: Real, phase: Real, order: usize) -> BranchPointEstimate {
        let prec = modulus.precision();
        BranchPointEstimate {
            modulus,
            phase,
            order,
            delta_modulus: Real::zero(prec),
            delta_phase: Real::zero(prec),
            persistence: RootPersistence { roots: Vec::new(), distances: Vec::new(), persistent: Vec::new() },
        }
    }

    pub fn nu_plus(&self) -> Complex {
        Complex::from_polar(&self.modulus, &self.phase)
    }
}

/// Discriminant roots of the diagonal approximant of order `k`.
pub fn diagonal_roots(series: &PowerSeries<Real>, k: usize) -> Result<Vec<Complex>> {
    let app = build_shafer(series, k, k, k)?;
    let disc = discriminant(&app);
    poly_roots(&disc, series.precision().digits())?.into_converged()
}

/// Runs the diagonal construction, root finding and persistence filter for
/// each order in `orders`; failures are reported per order.
pub fn estimate_branch_point(
    series: &PowerSeries<Real>,
    orders: &[usize],
    tol: f64,
) -> Result<Vec<(usize, Result<BranchPointEstimate>)>> {
    let mut ks: Vec<usize> = orders.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let Some(&kmax) = ks.last() else {
        return Ok(Vec::new());
    };
    let needed = 3 * (kmax + 1) + 2;
    if series.len() < needed {
        return Err(Error::InsufficientCoefficients { needed, available: series.len() });
    }
    let mut roots: BTreeMap<usize, Result<Vec<Complex>>> = BTreeMap::new();
    let mut rows: Vec<(usize, Result<BranchPointEstimate>)> = Vec::new();
    for &k in &ks {
        for kk in [k, k + 1] {
            roots.entry(kk).or_insert_with(|| diagonal_roots(series, kk));
        }
        let est = match (&roots[&k], &roots[&(k + 1)]) {
            (Ok(a), Ok(b)) => persistence_filter(a, b, tol).map(|(persistence, nu)| {
                let prec = series.precision();
                BranchPointEstimate {
                    modulus: nu.abs(),
                    phase: nu.arg(),
                    order: k,
                    delta_modulus: Real::zero(prec),
                    delta_phase: Real::zero(prec),
                    persistence,
                }
            }),
            (Err(e), _) | (_, Err(e)) => Err(clone_error(e)),
        };
        rows.push((k, est));
    }
    if let Some(best) = rows.iter().rev().find_map(|(_, r)| r.as_ref().ok()).cloned() {
        for (_, r) in rows.iter_mut() {
            if let Ok(e) = r {
                e.delta_modulus = (&e.modulus - &best.modulus).abs();
                e.delta_phase = (&e.phase - &best.phase).abs();
            }
        }
    }
    Ok(rows)
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::Singular(s) => Error::Singular(s.clone()),
        Error::NoConvergence(s) => Error::NoConvergence(s.clone()),
        other => Error::NoConvergence(other.to_string()),
    }
}

/// Distances of an estimate from the conjectured `R = 3.42` and
/// `phi = 89 pi / 156`.
pub fn suetin_check(estimate: &BranchPointEstimate) -> (Real, Real) {
    let prec = estimate.modulus.precision();
    let r = (&estimate.modulus - Real::from_ratio(342, 100, prec)).abs();
    let phi = (&estimate.phase - Real::pi(prec).mul_int(89).div_int(156)).abs();
    (r, phi)
}

/// Exponent `p` of a singularity `c (nu - nu_+)^p` near `target`.
///
/// `f'''/f''` has a simple pole at `nu_+` with residue `p - 2`; the diagonal
/// Pade approximant of `f'''/f''` of order `order`, lowered while singular,
/// supplies the pole and its residue. An analytic background enters this
/// ratio as `(nu - nu_+)^(2 - p)`, which stays bounded at the pole for
/// `p < 2`, unlike in `f''/f'`.
pub fn exponent_estimate(series: &PowerSeries<Real>, target: &Complex, order: usize) -> Result<Complex> {
    let c = series.coeffs();
    let needed = 2 * order + 4;
    if c.len() < needed {
        return Err(Error::InsufficientCoefficients { needed, available: c.len() });
    }
    let diff = |s: &[Real]| -> Vec<Real> { (1..s.len()).map(|n| s[n].mul_int(n as i64)).collect() };
    let d2 = diff(&diff(c));
    let d3 = diff(&d2);
    let v = series.variable();
    let inv = PowerSeries::new(v, d2[..d3.len()].to_vec()).reciprocal()?;
    let prec = series.precision();
    let ratio = PowerSeries::new(v, crate::resum::xi::mul_series(&d3, inv.coeffs(), d3.len()));
    // an exactly rational f'''/f'' makes high diagonal orders singular
    let mut approx = None;
    for n in (1..=order).rev() {
        match pade(&ratio, n, n) {
            Ok(a) if a.denominator.degree() > 0 => {
                approx = Some(a);
                break;
            }
            Ok(_) | Err(Error::Singular(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let approx = approx.ok_or_else(|| Error::Singular("no diagonal Pade of f'''/f'' has a pole".into()))?;
    let poles = poly_roots(&approx.denominator, prec.digits())?.roots;
    let nearest = poles
        .iter()
        .min_by(|a, b| (*a - target).abs().partial_cmp(&(*b - target).abs()).unwrap_or(std::cmp::Ordering::Equal))
        .ok_or(Error::Inconclusive { distance: f64::INFINITY })?;
    let distance = (nearest - target).abs();
    if distance > target.abs().div_int(10) {
        return Err(Error::Inconclusive { distance: distance.to_f64() });
    }
    let residue = approx.residue(nearest);
    Ok(Complex::new(residue.re + Real::from_int(2, prec), residue.im))
}

/// Convergence table: `K,R,phi,delta_R,delta_phi,n_persistent_roots,error`.
pub fn branch_report_csv(rows: &[(usize, Result<BranchPointEstimate>)]) -> String {
    let mut out = String::from("K,R,phi,delta_R,delta_phi,n_persistent_roots,error\n");
    for (k, r) in rows {
        match r {
            Ok(e) => {
                let d = e.modulus.precision().digits() as usize;
                let _ = writeln!(
                    out,
                    "{k},{},{},{},{},{},",
                    e.modulus.to_sci_string(d),
                    e.phase.to_sci_string(d),
                    e.delta_modulus.to_sci_string(6),
                    e.delta_phase.to_sci_string(6),
                    e.persistence.count()
                );
            }
            Err(err) => {
                let _ = writeln!(out, "{k},,,,,0,\"{}\"", err.to_string().replace('"', "'"));
            }
        }
    }
    out
}

/// Root cloud: `K,re,im,persistent_flag`.
pub fn root_cloud_csv(rows: &[(usize, Result<BranchPointEstimate>)]) -> String {
    let mut out = String::from("K,re,im,persistent_flag\n");
    for (k, r) in rows {
        if let Ok(e) = r {
            let d = e.modulus.precision().digits() as usize;
            for (z, &p) in e.persistence.roots.iter().zip(&e.persistence.persistent) {
                let _ = writeln!(out, "{k},{},{},{}", z.re.to_sci_string(d), z.im.to_sci_string(d), u8::from(p));
            }
        }
    }
    out
}

/// Persistence distances: `K,re,im,distance`.
pub fn persistence_csv(rows: &[(usize, Result<BranchPointEstimate>)]) -> String {
    let mut out = String::from("K,re,im,distance\n");
    for (k, r) in rows {
        if let Ok(e) = r {
            for (z, d) in e.persistence.roots.iter().zip(&e.persistence.distances) {
                let _ = writeln!(out, "{k},{},{},{}", z.re.to_sci_string(20), z.im.to_sci_string(20), d.to_sci_string(6));
            }
        }
    }
    out
}
