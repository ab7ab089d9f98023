use crate::error::{Error, Result};
use crate::linalg::solve_full_pivot;
use crate::real::{Complex, Real};
use crate::seriesgen::PowerSeries;
use crate::shafer::Poly;

/// Rational approximant `numerator / denominator` with `denominator(0) = 1`.
#[derive(Debug, Clone)]
pub struct PadeApproximant {
    pub numerator: Poly,
    pub denominator: Poly,
    /// Requested degrees `(M, N)`; trimming may lower the stored degrees.
    pub orders: (usize, usize),
}

/// `[M/N]` Pade approximant from the first `M + N + 1` coefficients.
pub fn pade(series: &PowerSeries<Real>, m: usize, n: usize) -> Result<PadeApproximant> {
    let needed = m + n + 1;
    if series.len() < needed {
        return Err(Error::InsufficientCoefficients { needed, available: series.len() });
    }
    let c = series.coeffs();
    let prec = series.precision();
    let zero = || Real::zero(prec);
    let at = |i: isize| if i < 0 { zero() } else { c[i as usize].clone() };

    let mut b = vec![Real::one(prec)];
    if n > 0 {
        let rows: Vec<Vec<Real>> = (m + 1..=m + n)
            .map(|k| (1..=n).map(|j| at(k as isize - j as isize)).collect())
            .collect();
        let rhs: Vec<Real> = (m + 1..=m + n).map(|k| -&c[k]).collect();
        b.extend(solve_full_pivot(rows, rhs)?);
    }
    let a: Vec<Real> = (0..=m)
        .map(|k| {
            let mut acc = zero();
            for (j, bj) in b.iter().enumerate().take(k.min(n) + 1) {
                acc.add_product(bj, &c[k - j]);
            }
            acc
        })
        .collect();
    Ok(PadeApproximant { numerator: Poly::new(a), denominator: Poly::new(b), orders: (m, n) })
}

impl PadeApproximant {
    pub fn evaluate(&self, x: &Real) -> Real {
        self.numerator.evaluate(x) / self.denominator.evaluate(x)
    }

    pub fn evaluate_complex(&self, z: &Complex) -> Complex {
        &self.numerator.evaluate_complex(z) / &self.denominator.evaluate_complex(z)
    }

    /// Taylor coefficients of the approximant through `len` terms.
    pub fn reexpand(&self, len: usize) -> Vec<Real> {
        let d = self.denominator.coeffs();
        let mut out: Vec<Real> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = self.numerator.coeff(k);
            for j in 1..d.len().min(k + 1) {
                acc = acc - &d[j] * &out[k - j];
            }
            out.push(acc / &d[0]);
        }
        out
    }

    /// Residue of the approximant at a simple pole `z`.
    pub fn residue(&self, z: &Complex) -> Complex {
        &self.numerator.evaluate_complex(z) / &self.denominator.derivative().evaluate_complex(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Precision;
    use crate::seriesgen::Variable;

    const P: Precision = Precision::from_digits(50);

    fn series(c: Vec<Real>) -> PowerSeries<Real> {
        PowerSeries::new(Variable::Nu, c)
    }

    #[test]
    fn exponential_one_one() {
        let s = series(vec![Real::one(P), Real::one(P), Real::from_ratio(1, 2, P)]);
        let p = pade(&s, 1, 1).unwrap();
        let half = Real::from_ratio(1, 2, P);
        assert_eq!(p.numerator.coeffs(), &[Real::one(P), half.clone()]);
        assert_eq!(p.denominator.coeffs(), &[Real::one(P), -half]);
    }

    #[test]
    fn geometric_is_reproduced() {
        let s = series(vec![Real::one(P); 4]);
        let p = pade(&s, 0, 1).unwrap();
        assert_eq!(p.denominator.coeffs(), &[Real::one(P), -Real::one(P)]);
        assert!(p.reexpand(10).iter().all(|c| (c - Real::one(P)).log10_abs() < -45.0));
        assert!(matches!(pade(&s, 2, 2), Err(Error::InsufficientCoefficients { needed: 5, available: 4 })));
    }
}
