use crate::error::{Error, Result};
use crate::real::Real;
use crate::scalar::{Rational, Scalar};
use crate::seriesgen::series::PowerSeries;

/// Least-squares line `digits = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    /// Pearson correlation; zero when either variable is constant.
    pub r: f64,
}

impl LinearFit {
    pub fn fit(points: &[(f64, f64)]) -> LinearFit {
        let n = points.len() as f64;
        if points.is_empty() {
            return LinearFit { intercept: 0.0, slope: 0.0, r: 0.0 };
        }
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        let r = if sxx > 0.0 && syy > 0.0 { sxy / (sxx * syy).sqrt() } else { 0.0 };
        LinearFit { intercept: my - slope * mx, slope, r }
    }

    /// Abscissa where the fitted line reaches zero digits.
    pub fn zero_crossing(&self) -> Option<f64> {
        (self.slope < 0.0).then(|| -self.intercept / self.slope)
    }
}

/// Matching digits between floating and exact coefficients, per order.
#[derive(Debug, Clone)]
pub struct DigitLoss {
    /// `(n, -log10 |float_n / exact_n - 1|)`, capped at the digits the
    /// mantissa actually carries.
    pub points: Vec<(usize, f64)>,
    /// Fit against the order `n`.
    pub by_order: LinearFit,
    /// Fit against the half order `n / 2` (index of the series in `mu^2`).
    pub by_half_order: LinearFit,
    pub precision_digits: u32,
}

impl DigitLoss {
    /// Highest order the fit predicts to keep any correct digit.
    pub fn max_order(&self) -> Option<f64> {
        self.by_order.zero_crossing()
    }
}

/// Compares a floating-point series with its exact counterpart.
///
/// Orders whose exact coefficient vanishes carry no relative error and are
/// skipped.
pub fn digit_loss_diagnostic(exact: &PowerSeries<Rational>, float: &PowerSeries<Real>) -> Result<DigitLoss> {
    if exact.len() != float.len() {
        return Err(Error::OrderMismatch { left: exact.order(), right: float.order() });
    }
    let p = float.precision();
    let cap = p.effective_digits().floor();
    let wide = p.extended(20);
    let mut points = Vec::new();
    for (n, (e, f)) in exact.coeffs().iter().zip(float.coeffs()).enumerate() {
        if e.is_zero() {
            continue;
        }
        let ev = e.to_real(wide);
        let rel = (f.with_precision(wide) - &ev) / &ev;
        let digits = (-rel.log10_abs()).min(cap);
        points.push((n, digits));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(n, d)| (n as f64, d)).collect();
    let half: Vec<(f64, f64)> = points.iter().map(|&(n, d)| (n as f64 / 2.0, d)).collect();
    Ok(DigitLoss {
        points,
        by_order: LinearFit::fit(&xy),
        by_half_order: LinearFit::fit(&half),
        precision_digits: p.digits(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Precision;
    use crate::seriesgen::series::Variable;

    #[test]
    fn exact_line_is_recovered() {
        let pts: Vec<(f64, f64)> = (0..10).map(|x| (x as f64, 100.0 - 0.5 * x as f64)).collect();
        let fit = LinearFit::fit(&pts);
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 100.0).abs() < 1e-12);
        assert!((fit.r + 1.0).abs() < 1e-12);
        assert!((fit.zero_crossing().unwrap() - 200.0).abs() < 1e-9);
    }

    #[test]
    fn identical_series_are_capped() {
        let p = Precision::from_digits(60);
        let exact = PowerSeries::new(Variable::Mu, vec![Rational::new(1, 1), Rational::new(0, 1), Rational::new(-1, 16)]);
        let float = exact.to_real(p);
        let d = digit_loss_diagnostic(&exact, &float).unwrap();
        assert_eq!(d.points.len(), 2);
        assert!(d.points.iter().all(|&(_, digits)| digits == p.effective_digits().floor()));
        assert_eq!(d.by_order.slope, 0.0);
        assert_eq!(d.max_order(), None);
    }
}
