//! Resummation of the period and amplitude series for all `mu`.
//!
//! Known large-`mu` terms, written through the map `xi(nu)`, are subtracted
//! from the series; the remainder is Pade-approximated in `nu` and the terms
//! are added back in closed form.

mod airy;
mod pade;
pub(crate) mod xi;

use std::fmt::Write as _;

pub use airy::{airy_ai, airy_zero, gamma_fraction};
pub use pade::{pade, PadeApproximant};
pub use xi::{log_xi_series, xi_series, XiMap};

use crate::error::{Error, Result};
use crate::real::{Precision, Real};
use crate::seriesgen::{PowerSeries, Quantity, Variable};

/// Default `[M, M+1]` period and `[N-2, N]` amplitude degree.
pub const DEFAULT_PADE_DEGREE: usize = 40;

/// Constants of the large-`mu` expansions.
#[derive(Debug, Clone)]
pub struct AsymptoticConstants {
    /// First negative zero of `Ai`.
    pub airy_alpha: Real,
    /// Constant of the `1/mu` period term.
    pub c_t: Real,
    pub beta: Real,
}

pub const C_T_DEFAULT: &str = "1.3246";
pub const BETA_DEFAULT: &str = "0.1723";

impl AsymptoticConstants {
    pub fn new(prec: Precision) -> Result<AsymptoticConstants> {
        Ok(AsymptoticConstants {
            airy_alpha: airy_zero(prec.digits().max(9))?.with_precision(prec),
            c_t: Real::parse(C_T_DEFAULT, prec)?,
            beta: Real::parse(BETA_DEFAULT, prec)?,
        })
    }

    pub fn precision(&self) -> Precision {
        self.airy_alpha.precision()
    }

    pub fn log4(&self) -> Real {
        Real::from_int(4, self.precision()).ln()
    }

    pub fn three_minus_log4(&self) -> Real {
        Real::from_int(3, self.precision()) - self.log4()
    }

    pub fn eight_log3(&self) -> Real {
        Real::from_int(3, self.precision()).ln().mul_int(8)
    }
}

/// `coeff * (log xi)^log_power * xi^(s.0 / s.1)`.
#[derive(Debug, Clone)]
pub struct AsymptoticTerm {
    pub coeff: Real,
    pub log_power: u8,
    pub exponent: (i64, i64),
}

impl AsymptoticTerm {
    fn new(coeff: Real, log_power: u8, exponent: (i64, i64)) -> AsymptoticTerm {
        AsymptoticTerm { coeff, log_power, exponent }
    }

    fn series(&self, map: &XiMap, len: usize) -> Vec<Real> {
        let mut s = xi_series(map, self.exponent, len).into_coeffs();
        if self.log_power == 1 {
            s = xi::mul_series(log_xi_series(map, len).coeffs(), &s, len);
        }
        s.into_iter().map(|c| c * &self.coeff).collect()
    }

    fn value(&self, map: &XiMap, nu: &Real) -> Real {
        let mut v = map.xi_pow(nu, self.exponent) * &self.coeff;
        if self.log_power == 1 {
            v = v * map.log_xi(nu);
        }
        v
    }
}

/// Large-`mu` period terms in `xi`:
/// `(3 - log 4) xi - 3 alpha xi^(-1/3) - (2/3) log(xi)/xi - c/xi + gamma xi^(-4/3)`
/// with `c = c_T + R cos(phi) (log 4 - 3) / 2`.
pub fn period_terms(map: &XiMap, consts: &AsymptoticConstants, gamma: &Real) -> Vec<AsymptoticTerm> {
    let prec = consts.precision();
    let c = &consts.c_t - consts.three_minus_log4() * map.modulus() * map.phase().cos() / Real::from_int(2, prec);
    vec![
        AsymptoticTerm::new(consts.three_minus_log4(), 0, (1, 1)),
        AsymptoticTerm::new(-consts.airy_alpha.mul_int(3), 0, (-1, 3)),
        AsymptoticTerm::new(Real::from_ratio(-2, 3, prec), 1, (-1, 1)),
        AsymptoticTerm::new(-c, 0, (-1, 1)),
        AsymptoticTerm::new(gamma.clone(), 0, (-4, 3)),
    ]
}

/// Sign pattern of the `log(xi)/xi^2` and `1/xi^2` amplitude terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AmplitudeForm {
    /// `2 - (alpha/3) xi^(-4/3) - (16/27) log(xi)/xi^2 + b/xi^2`, matching the
    /// large-`mu` amplitude expansion; the shooting oracle confirms these signs.
    #[default]
    Expansion,
    /// `2 - (alpha/3) xi^(-4/3) + (16/27) log(xi)/xi^2 - b/xi^2`.
    Flipped,
}

/// Large-`mu` amplitude terms in `xi` with
/// `b = (3 beta - 1 + log 4 - 8 log 3) / 9`.
pub fn amplitude_terms(consts: &AsymptoticConstants, form: AmplitudeForm) -> Vec<AsymptoticTerm> {
    let prec = consts.precision();
    let b = (consts.beta.mul_int(3) - Real::one(prec) + consts.log4() - consts.eight_log3()).div_int(9);
    let sign = match form {
        AmplitudeForm::Expansion => 1,
        AmplitudeForm::Flipped => -1,
    };
    vec![
        AsymptoticTerm::new(Real::from_int(2, prec), 0, (0, 1)),
        AsymptoticTerm::new(-consts.airy_alpha.div_int(3), 0, (-4, 3)),
        AsymptoticTerm::new(Real::from_ratio(-16 * sign, 27, prec), 1, (-2, 1)),
        AsymptoticTerm::new(b.mul_int(sign), 0, (-2, 1)),
    ]
}

/// `series - sum_terms`, all truncated to the series length.
pub fn depurate(series: &PowerSeries<Real>, map: &XiMap, terms: &[AsymptoticTerm]) -> Result<PowerSeries<Real>> {
    if series.variable() != Variable::Nu {
        return Err(Error::Precondition("depuration needs a series in nu".into()));
    }
    let len = series.len();
    let mut out = series.coeffs().to_vec();
    for t in terms {
        let s = t.series(map, len);
        if s.len() != len {
            return Err(Error::OrderMismatch { left: len, right: s.len() });
        }
        for (o, c) in out.iter_mut().zip(s) {
            *o = &*o - &c;
        }
    }
    Ok(PowerSeries::new(Variable::Nu, out))
}

/// Closed-form sum of `terms` at `nu`.
pub fn reconstitute(map: &XiMap, terms: &[AsymptoticTerm], nu: &Real) -> Real {
    terms.iter().fold(Real::zero(nu.precision()), |acc, t| acc + t.value(map, nu))
}

pub fn depurate_period(
    t: &PowerSeries<Real>,
    map: &XiMap,
    consts: &AsymptoticConstants,
    gamma: &Real,
) -> Result<PowerSeries<Real>> {
    depurate(t, map, &period_terms(map, consts, gamma))
}

pub fn depurate_amplitude(
    a: &PowerSeries<Real>,
    map: &XiMap,
    consts: &AsymptoticConstants,
    form: AmplitudeForm,
) -> Result<PowerSeries<Real>> {
    depurate(a, map, &amplitude_terms(consts, form))
}

#[derive(Debug, Clone)]
pub struct ResumResult {
    pub quantity: Quantity,
    pub nu: Real,
    pub value: Real,
    pub pade_orders: (usize, usize),
    /// Period only.
    pub gamma: Option<Real>,
}

/// A depurated series' Pade approximant together with the terms to restore.
#[derive(Debug, Clone)]
pub struct Resummation {
    quantity: Quantity,
    map: XiMap,
    terms: Vec<AsymptoticTerm>,
    pade: PadeApproximant,
    gamma: Option<Real>,
}

impl Resummation {
    /// `[M, M+1]` Pade of the depurated period.
    pub fn period(
        t: &PowerSeries<Real>,
        map: &XiMap,
        consts: &AsymptoticConstants,
        gamma: &Real,
        m: usize,
    ) -> Result<Resummation> {
        let terms = period_terms(map, consts, gamma);
        let dep = depurate(&t.truncated(t.len().min(2 * m + 2)), map, &terms)?;
        Ok(Resummation {
            quantity: Quantity::Period,
            map: map.clone(),
            terms,
            pade: pade(&dep, m, m + 1)?,
            gamma: Some(gamma.clone()),
        })
    }

    /// `[N-2, N]` Pade of the depurated amplitude.
    pub fn amplitude(
        a: &PowerSeries<Real>,
        map: &XiMap,
        consts: &AsymptoticConstants,
        form: AmplitudeForm,
        n: usize,
    ) -> Result<Resummation> {
        if n < 2 {
            return Err(Error::Precondition("amplitude resummation needs N >= 2".into()));
        }
        let terms = amplitude_terms(consts, form);
        let dep = depurate(&a.truncated(a.len().min(2 * n - 1)), map, &terms)?;
        Ok(Resummation { quantity: Quantity::Amplitude, map: map.clone(), terms, pade: pade(&dep, n - 2, n)?, gamma: None })
    }

    pub fn pade(&self) -> &PadeApproximant {
        &self.pade
    }

    pub fn evaluate(&self, nu: &Real) -> Result<ResumResult> {
        if nu.is_negative() {
            return Err(Error::Precondition("resummation needs nu >= 0".into()));
        }
        let d = &self.pade.denominator;
        let abs_sum = d
            .coeffs()
            .iter()
            .rev()
            .fold(Real::zero(nu.precision()), |acc, c| acc * nu + c.abs());
        let dv = d.evaluate(nu);
        let digits = nu.precision().digits() as f64;
        if dv.is_zero() || dv.log10_abs() - abs_sum.log10_abs() < -digits / 2.0 {
            return Err(Error::SpuriousPole { nu: nu.to_f64() });
        }
        let value = self.pade.numerator.evaluate(nu) / dv + reconstitute(&self.map, &self.terms, nu);
        Ok(ResumResult {
            quantity: self.quantity,
            nu: nu.clone(),
            value,
            pade_orders: self.pade.orders,
            gamma: self.gamma.clone(),
        })
    }
}

pub fn resummed_period(
    nu: &Real,
    t: &PowerSeries<Real>,
    map: &XiMap,
    consts: &AsymptoticConstants,
    gamma: &Real,
    m: usize,
) -> Result<ResumResult> {
    Resummation::period(t, map, consts, gamma, m)?.evaluate(nu)
}

pub fn resummed_amplitude(
    nu: &Real,
    a: &PowerSeries<Real>,
    map: &XiMap,
    consts: &AsymptoticConstants,
    form: AmplitudeForm,
    n: usize,
) -> Result<ResumResult> {
    Resummation::amplitude(a, map, consts, form, n)?.evaluate(nu)
}

/// Relative period errors `|1 - T_resum(gamma) / T_ref|` over a grid of `gamma`.
#[derive(Debug)]
pub struct GammaSweep {
    pub mu: Real,
    pub rows: Vec<(Real, Result<Real>)>,
}

impl GammaSweep {
    /// Index of the smallest successful error.
    pub fn best(&self) -> Option<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, (_, r))| r.as_ref().ok().map(|e| (i, e)))
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
    }

    /// Whether the minimum lies strictly inside the grid.
    pub fn has_interior_minimum(&self) -> bool {
        self.best().is_some_and(|i| i > 0 && i + 1 < self.rows.len())
    }

    /// `gamma,rel_err,error`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gamma,rel_err,error\n");
        for (g, r) in &self.rows {
            let g = g.to_sci_string(20);
            match r {
                Ok(e) => writeln!(out, "{g},{},", e.to_sci_string(20)),
                Err(e) => writeln!(out, "{g},,\"{e}\""),
            }
            .expect("writing to a String");
        }
        out
    }
}

pub fn gamma_sweep(
    mu: &Real,
    grid: &[Real],
    t: &PowerSeries<Real>,
    map: &XiMap,
    consts: &AsymptoticConstants,
    m: usize,
    reference: &Real,
) -> GammaSweep {
    let nu = mu * mu;
    let rows = grid
        .iter()
        .map(|g| {
            let r = resummed_period(&nu, t, map, consts, g, m)
                .map(|r| (Real::one(nu.precision()) - r.value / reference).abs());
            (g.clone(), r)
        })
        .collect();
    GammaSweep { mu: mu.clone(), rows }
}

/// `a:b:n` grid with `n` evenly spaced points.
pub fn linear_grid(a: &Real, b: &Real, n: usize) -> Vec<Real> {
    match n {
        0 => Vec::new(),
        1 => vec![a.clone()],
        _ => (0..n).map(|i| a + (b - a) * Real::from_int(i as i64, a.precision()) / Real::from_int(n as i64 - 1, a.precision())).collect(),
    }
}

/// `key=value` resummation settings; `#` starts a comment line.
#[derive(Debug, Clone, Default)]
pub struct ResumConfig {
    pub modulus: Option<String>,
    pub phase: Option<String>,
    pub c_t: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    pub precision_digits: Option<u32>,
    /// Diagonal order the branch point came from, when written by the branch stage.
    pub order: Option<usize>,
}

impl ResumConfig {
    pub fn parse(text: &str) -> Result<ResumConfig> {
        let mut cfg = ResumConfig::default();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {line:?}")))?;
            let v = v.trim().to_string();
            match k.trim() {
                "R" => cfg.modulus = Some(v),
                "phi" => cfg.phase = Some(v),
                "c_T" => cfg.c_t = Some(v),
                "beta" => cfg.beta = Some(v),
                "gamma" => cfg.gamma = Some(v),
                "precision_digits" => {
                    cfg.precision_digits = Some(v.parse().map_err(|_| Error::Parse(format!("bad precision_digits {v:?}")))?)
                }
                "K" => cfg.order = Some(v.parse().map_err(|_| Error::Parse(format!("bad K {v:?}")))?),
                other => return Err(Error::Parse(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let fields: [(&str, Option<String>); 7] = [
            ("R", self.modulus.clone()),
            ("phi", self.phase.clone()),
            ("c_T", self.c_t.clone()),
            ("beta", self.beta.clone()),
            ("gamma", self.gamma.clone()),
            ("precision_digits", self.precision_digits.map(|p| p.to_string())),
            ("K", self.order.map(|k| k.to_string())),
        ];
        for (k, v) in fields {
            if let Some(v) = v {
                writeln!(out, "{k}={v}").expect("writing to a String");
            }
        }
        out
    }

    /// Overlays the keys set in `other`.
    pub fn merged(mut self, other: &ResumConfig) -> ResumConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f.clone(); } )* };
        }
        take!(modulus, phase, c_t, beta, gamma, precision_digits, order);
        self
    }

    pub fn xi_map(&self, prec: Precision) -> Result<XiMap> {
        let r = self.modulus.as_deref().ok_or_else(|| Error::Precondition("R missing from config".into()))?;
        let phi = self.phase.as_deref().ok_or_else(|| Error::Precondition("phi missing from config".into()))?;
        XiMap::new(Real::parse(r, prec)?, Real::parse(phi, prec)?)
    }

    pub fn constants(&self, prec: Precision) -> Result<AsymptoticConstants> {
        let mut c = AsymptoticConstants::new(prec)?;
        if let Some(v) = &self.c_t {
            c.c_t = Real::parse(v, prec)?;
        }
        if let Some(v) = &self.beta {
            c.beta = Real::parse(v, prec)?;
        }
        Ok(c)
    }

    pub fn gamma(&self, prec: Precision) -> Result<Real> {
        self.gamma.as_deref().map_or(Ok(Real::zero(prec)), |g| Real::parse(g, prec))
    }
}
