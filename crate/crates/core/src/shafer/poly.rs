use std::fmt;

use crate::real::{Complex, Precision, Real};

/// Polynomial with real coefficients, lowest degree first.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Real>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

impl Poly {
    /// Builds and trims trailing zeros; the zero polynomial keeps one entry.
    pub fn new(mut coeffs: Vec<Real>) -> Poly {
        assert!(!coeffs.is_empty(), "polynomial needs a coefficient list");
        while coeffs.len() > 1 && coeffs.last().is_some_and(Real::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], prec: Precision) -> Poly {
        Poly::new(coeffs.iter().map(|&c| Real::from_int(c, prec)).collect())
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn precision(&self) -> Precision {
        self.coeffs[0].precision()
    }

    pub fn leading(&self) -> &Real {
        self.coeffs.last().expect("nonempty")
    }

    pub fn coeff(&self, i: usize) -> Real {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Real::zero(self.precision()))
    }

    pub fn evaluate(&self, x: &Real) -> Real {
        let mut acc = Real::zero(self.precision());
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn evaluate_complex(&self, z: &Complex) -> Complex {
        let mut acc = Complex::zero(self.precision());
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc.re = acc.re + c;
        }
        acc
    }

    /// Value and first derivative at `z` in one Horner pass.
    pub fn evaluate_with_derivative(&self, z: &Complex) -> (Complex, Complex) {
        let prec = self.precision();
        let mut p = Complex::zero(prec);
        let mut dp = Complex::zero(prec);
        for c in self.coeffs.iter().rev() {
            dp = &(&dp * z) + &p;
            p = &p * z;
            p.re = p.re + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() == 1 {
            return Poly::new(vec![Real::zero(self.precision())]);
        }
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i64)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let prec = self.precision().max(other.precision());
        let mut out = vec![Real::zero(prec); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j].add_product(a, b);
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn scale(&self, k: &Real) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision::from_digits(40);

    #[test]
    fn arithmetic_and_trimming() {
        let a = Poly::from_ints(&[1, 1], P);
        let b = Poly::from_ints(&[-1, 1, 0, 0], P);
        assert_eq!(b.degree(), 1);
        let prod = a.mul(&b);
        assert_eq!(prod, Poly::from_ints(&[-1, 0, 1], P));
        assert_eq!(prod.sub(&Poly::from_ints(&[0, 0, 1], P)), Poly::from_ints(&[-1], P));
        assert_eq!(prod.derivative(), Poly::from_ints(&[0, 2], P));
        assert_eq!(prod.evaluate(&Real::from_int(3, P)), Real::from_int(8, P));
    }

    #[test]
    fn complex_horner_with_derivative() {
        let p = Poly::from_ints(&[1, 0, 1], P);
        let i = Complex::new(Real::zero(P), Real::one(P));
        let (v, d) = p.evaluate_with_derivative(&i);
        assert!(v.is_zero());
        assert_eq!(d, Complex::new(Real::zero(P), Real::from_int(2, P)));
    }
}
