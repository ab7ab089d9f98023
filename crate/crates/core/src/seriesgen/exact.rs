//! Exact engine: trigonometric polynomials over a shared integer denominator.
//!
//! Keeping one denominator per polynomial turns each harmonic product into an
//! integer multiply-add; reduction happens once per order.

use dashu_int::ops::UnsignedAbs;
use dashu_int::{IBig, UBig};

use crate::error::Result;
use crate::scalar::Rational;
use crate::seriesgen::lp::CubicEngine;
use crate::seriesgen::trig::TrigPoly;

/// `(sum_k cos_k cos(k tau) + sin_k sin(k tau)) / den` with integer numerators.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct QTrig {
    den: UBig,
    cos: Vec<IBig>,
    sin: Vec<IBig>,
}

fn gcd_u(a: &UBig, b: &UBig) -> UBig {
    dashu_int::ops::Gcd::gcd(a, b)
}

impl QTrig {
    fn zero(h: usize) -> QTrig {
        QTrig { den: UBig::ONE, cos: vec![IBig::ZERO; h + 1], sin: vec![IBig::ZERO; h + 1] }
    }

    pub(crate) fn from_rational(p: &TrigPoly<Rational>) -> QTrig {
        let mut den = UBig::ONE;
        for c in p.cos_coeffs().iter().chain(p.sin_coeffs()) {
            let d = c.denominator();
            let g = gcd_u(&den, d);
            den = &den / &g * d;
        }
        let scale = |c: &Rational| -> IBig { c.numerator() * IBig::from(&den / c.denominator()) };
        let cos = p.cos_coeffs().iter().map(scale).collect();
        let mut sin = vec![IBig::ZERO];
        sin.extend(p.sin_coeffs().iter().map(scale));
        QTrig { den, cos, sin }
    }

    pub(crate) fn to_rational(&self) -> TrigPoly<Rational> {
        let q = |n: &IBig| Rational::from_parts(n.clone(), self.den.clone());
        TrigPoly::from_parts(self.cos.iter().map(q).collect(), self.sin[1..].iter().map(q).collect(), ())
    }

    fn h(&self) -> usize {
        self.cos.len() - 1
    }

    /// Product via `cos a cos b = (cos(a-b) + cos(a+b))/2` and friends.
    fn mul(&self, other: &QTrig) -> QTrig {
        // the common factor 1/2 goes into the denominator
        let mut out = QTrig::zero(self.h() + other.h());
        for i in 0..=self.h() {
            let (ci, si) = (&self.cos[i], &self.sin[i]);
            if ci == &IBig::ZERO && si == &IBig::ZERO {
                continue;
            }
            for j in 0..=other.h() {
                let (cj, sj) = (&other.cos[j], &other.sin[j]);
                if cj == &IBig::ZERO && sj == &IBig::ZERO {
                    continue;
                }
                let (sum, diff) = (i + j, i.abs_diff(j));
                let forward = i >= j;
                if ci != &IBig::ZERO && cj != &IBig::ZERO {
                    let p = ci * cj;
                    out.cos[sum] += &p;
                    out.cos[diff] += p;
                }
                if si != &IBig::ZERO && sj != &IBig::ZERO {
                    let p = si * sj;
                    out.cos[diff] += &p;
                    out.cos[sum] -= p;
                }
                if si != &IBig::ZERO && cj != &IBig::ZERO {
                    // sin i cos j = (sin(i+j) + sin(i-j)) / 2
                    let p = si * cj;
                    out.sin[sum] += &p;
                    if diff > 0 {
                        if forward {
                            out.sin[diff] += p;
                        } else {
                            out.sin[diff] -= p;
                        }
                    }
                }
                if ci != &IBig::ZERO && sj != &IBig::ZERO {
                    // cos i sin j = (sin(i+j) - sin(i-j)) / 2
                    let p = ci * sj;
                    out.sin[sum] += &p;
                    if diff > 0 {
                        if forward {
                            out.sin[diff] -= p;
                        } else {
                            out.sin[diff] += p;
                        }
                    }
                }
            }
        }
        out.den = UBig::from(2u8) * &self.den * &other.den;
        out
    }

    fn scale_int(&mut self, k: u32) {
        for c in self.cos.iter_mut().chain(self.sin.iter_mut()) {
            *c *= IBig::from(k);
        }
    }

    fn add_assign(&mut self, other: &QTrig) {
        if other.h() > self.h() {
            self.cos.resize(other.h() + 1, IBig::ZERO);
            self.sin.resize(other.h() + 1, IBig::ZERO);
        }
        let g = gcd_u(&self.den, &other.den);
        let fs = IBig::from(&other.den / &g);
        let fo = IBig::from(&self.den / &g);
        if fs != IBig::ONE {
            for c in self.cos.iter_mut().chain(self.sin.iter_mut()) {
                *c *= &fs;
            }
        }
        for (k, (c, s)) in other.cos.iter().zip(&other.sin).enumerate() {
            self.cos[k] += c * &fo;
            self.sin[k] += s * &fo;
        }
        self.den = &self.den / &g * &other.den;
    }

    fn reduce(&mut self) {
        let mut g = self.den.clone();
        for c in self.cos.iter().chain(&self.sin) {
            if g == UBig::ONE {
                return;
            }
            if c != &IBig::ZERO {
                g = gcd_u(&g, &c.clone().unsigned_abs());
            }
        }
        if g == UBig::ONE {
            return;
        }
        let gi = IBig::from(g.clone());
        for c in self.cos.iter_mut().chain(self.sin.iter_mut()) {
            *c /= &gi;
        }
        self.den /= g;
    }

    /// `factor * a * cos tau`.
    fn cos1(a: &Rational, factor: u8) -> QTrig {
        let mut t = QTrig::zero(1);
        t.den = a.denominator().clone();
        t.cos[1] = a.numerator() * IBig::from(factor);
        t
    }
}

pub struct ExactEngine {
    ys: Vec<QTrig>,
    y2: Vec<QTrig>,
}

impl ExactEngine {
    pub fn new() -> Self {
        ExactEngine { ys: Vec::new(), y2: Vec::new() }
    }

    fn square_at(&self, m: usize) -> QTrig {
        let mut acc = QTrig::zero(0);
        for i in (0..=m).take_while(|&i| 2 * i < m) {
            acc.add_assign(&self.ys[i].mul(&self.ys[m - i]));
        }
        acc.scale_int(2);
        if m.is_multiple_of(2) {
            acc.add_assign(&self.ys[m / 2].mul(&self.ys[m / 2]));
        }
        acc.reduce();
        acc
    }
}

impl Default for ExactEngine {
    fn default() -> Self {
        ExactEngine::new()
    }
}

impl CubicEngine<Rational> for ExactEngine {
    fn push(&mut self, y: &TrigPoly<Rational>) -> Result<TrigPoly<Rational>> {
        let m = self.ys.len();
        self.ys.push(QTrig::from_rational(y));
        let sq = self.square_at(m);
        self.y2.push(sq);
        let mut cube = QTrig::zero(0);
        for i in 0..=m {
            cube.add_assign(&self.y2[i].mul(&self.ys[m - i]));
        }
        cube.reduce();
        Ok(cube.to_rational())
    }

    fn shift_last(&mut self, a: &Rational) {
        let m = self.ys.len() - 1;
        self.ys[m].add_assign(&QTrig::cos1(a, 1));
        self.ys[m].reduce();
        if m == 0 {
            self.y2[0] = self.square_at(0);
        } else {
            // [y^2]_m gains 2 a y_0 cos tau
            let shift = QTrig::cos1(a, 2).mul(&self.ys[0]);
            self.y2[m].add_assign(&shift);
            self.y2[m].reduce();
        }
    }
}
