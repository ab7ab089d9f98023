//! Plain-text coefficient files.
//!
//! ```text
//! # quantity=omega
//! # variable=mu
//! # mode=exact
//! # precision_digits=exact
//! # order=4
//! 1/1
//! 0/1
//! -1/16
//! ...
//! ```
//!
//! Floating-point files carry every working digit in scientific notation.
//! Coefficient text is kept verbatim, so reading and rewriting a file
//! reproduces it byte for byte.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::real::{Precision, Real};
use crate::scalar::{Rational, Scalar};
use crate::seriesgen::series::{PowerSeries, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Omega,
    Amplitude,
    Period,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Omega => "omega",
            Quantity::Amplitude => "amplitude",
            Quantity::Period => "period",
        })
    }
}

impl FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Quantity> {
        match s {
            "omega" => Ok(Quantity::Omega),
            "amplitude" => Ok(Quantity::Amplitude),
            "period" => Ok(Quantity::Period),
            _ => Err(Error::Parse(format!("unknown quantity {s:?}"))),
        }
    }
}

/// Arithmetic a series was produced in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float(Precision),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFile {
    pub quantity: Quantity,
    pub variable: Variable,
    pub mode: Mode,
    /// Coefficient text, one entry per power.
    pub coeffs: Vec<String>,
}

impl CoeffFile {
    pub fn from_real(quantity: Quantity, series: &PowerSeries<Real>) -> CoeffFile {
        let p = series.precision();
        CoeffFile {
            quantity,
            variable: series.variable(),
            mode: Mode::Float(p),
            coeffs: series.coeffs().iter().map(|c| c.to_sci_string(p.digits() as usize)).collect(),
        }
    }

    pub fn from_rational(quantity: Quantity, series: &PowerSeries<Rational>) -> CoeffFile {
        CoeffFile {
            quantity,
            variable: series.variable(),
            mode: Mode::Exact,
            coeffs: series.coeffs().iter().map(Rational::to_string).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Precision recorded in the file, or `fallback` for exact files.
    pub fn precision_or(&self, fallback: Precision) -> Precision {
        match self.mode {
            Mode::Float(p) => p,
            Mode::Exact => fallback,
        }
    }

    pub fn to_text(&self) -> String {
        let (mode, digits) = match self.mode {
            Mode::Exact => ("exact", "exact".to_string()),
            Mode::Float(p) => ("float", p.digits().to_string()),
        };
        let mut out = format!(
            "# quantity={}\n# variable={}\n# mode={mode}\n# precision_digits={digits}\n# order={}\n",
            self.quantity,
            self.variable,
            self.order()
        );
        for c in &self.coeffs {
            out.push_str(c);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<CoeffFile> {
        let mut quantity = None;
        let mut variable = None;
        let mut mode = None;
        let mut digits = None;
        let mut order = None;
        let mut coeffs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let Some((k, v)) = h.trim().split_once('=') else {
                    continue;
                };
                let v = v.trim();
                match k.trim() {
                    "quantity" => quantity = Some(v.parse::<Quantity>()?),
                    "variable" => {
                        variable = Some(match v {
                            "mu" => Variable::Mu,
                            "nu" => Variable::Nu,
                            _ => return Err(Error::Parse(format!("unknown variable {v:?}"))),
                        })
                    }
                    "mode" => mode = Some(v.to_string()),
                    "precision_digits" => digits = Some(v.to_string()),
                    "order" => {
                        order = Some(v.parse::<usize>().map_err(|e| Error::Parse(format!("order {v:?}: {e}")))?)
                    }
                    _ => {}
                }
                continue;
            }
            if line.contains(char::is_whitespace) {
                return Err(Error::Parse(format!("line {}: one coefficient per line expected", lineno + 1)));
            }
            coeffs.push(line.to_string());
        }
        let missing = |k: &str| Error::Parse(format!("missing header {k}"));
        let mode = match (mode.as_deref(), digits.as_deref()) {
            (Some("exact"), _) => Mode::Exact,
            (Some("float"), Some(d)) => {
                let d: u32 = d.parse().map_err(|e| Error::Parse(format!("precision_digits {d:?}: {e}")))?;
                Mode::Float(Precision::from_digits(d))
            }
            (Some("float"), None) => return Err(missing("precision_digits")),
            (Some(m), _) => return Err(Error::Parse(format!("unknown mode {m:?}"))),
            (None, _) => return Err(missing("mode")),
        };
        let file = CoeffFile {
            quantity: quantity.ok_or_else(|| missing("quantity"))?,
            variable: variable.ok_or_else(|| missing("variable"))?,
            mode,
            coeffs,
        };
        let order = order.ok_or_else(|| missing("order"))?;
        if file.coeffs.len() != order + 1 {
            return Err(Error::Parse(format!(
                "header announces order {order} but {} coefficients follow",
                file.coeffs.len()
            )));
        }
        Ok(file)
    }

    /// Exact coefficients; fails for floating-point files.
    pub fn to_rational_series(&self) -> Result<PowerSeries<Rational>> {
        if self.mode != Mode::Exact {
            return Err(Error::Precondition("exact coefficients requested from a float file".into()));
        }
        let coeffs = self.coeffs.iter().map(|c| c.parse()).collect::<Result<Vec<Rational>>>()?;
        Ok(PowerSeries::new(self.variable, coeffs))
    }

    /// Coefficients as reals; exact files are rounded to `prec`, float files
    /// are read at their own precision when `prec` is `None`.
    pub fn to_real_series(&self, prec: Option<Precision>) -> Result<PowerSeries<Real>> {
        let coeffs = match self.mode {
            Mode::Exact => {
                let p = prec.ok_or_else(|| {
                    Error::Precondition("a working precision is needed to read exact coefficients".into())
                })?;
                self.coeffs
                    .iter()
                    .map(|c| c.parse::<Rational>().map(|q| q.to_real(p)))
                    .collect::<Result<Vec<_>>>()?
            }
            Mode::Float(own) => {
                let p = prec.unwrap_or(own);
                self.coeffs.iter().map(|c| Real::parse(c, p)).collect::<Result<Vec<_>>>()?
            }
        };
        if coeffs.is_empty() {
            return Err(Error::Parse("no coefficients".into()));
        }
        Ok(PowerSeries::new(self.variable, coeffs))
    }
}
