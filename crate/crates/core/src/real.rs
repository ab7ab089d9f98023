//! Arbitrary-precision reals and complex numbers.
//!
//! [`Real`] wraps an `astro-float` value together with the binary precision it
//! was created at. Binary operations run at the larger precision of their two
//! operands, so a value built with [`Precision::from_digits`] keeps its working
//! precision through any chain of arithmetic.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign, WORD_BIT_SIZE};

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Bits of headroom kept beyond the nominal decimal precision.
const GUARD_BITS: usize = 4;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision, expressed in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const fn from_digits(digits: u32) -> Self {
        Precision { digits }
    }

    pub const fn digits(self) -> u32 {
        self.digits
    }

    /// Mantissa bits used for this precision: the nominal bits plus guard
    /// bits, rounded up to whole 64-bit words (a whole number of backend
    /// words on both 32- and 64-bit targets).
    pub fn bits(self) -> usize {
        let nominal = (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        nominal.div_ceil(64) * 64
    }

    /// Decimal digits actually carried by the mantissa (at least `digits`).
    pub fn effective_digits(self) -> f64 {
        self.bits() as f64 * std::f64::consts::LOG10_2
    }

    /// A precision with `extra` more decimal digits.
    pub fn extended(self, extra: u32) -> Self {
        Precision { digits: self.digits + extra }
    }

    /// `10^(-exponent)` as an `f64`-free threshold at this precision.
    pub fn epsilon_pow(self, exponent: i64) -> Real {
        Real::from_int(10, self).powi(-exponent)
    }
}

/// Arbitrary-precision binary floating-point number.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: Precision,
}

impl Real {
    fn wrap(v: BigFloat, prec: Precision) -> Real {
        Real { v, prec }
    }

    fn bits(&self) -> usize {
        self.prec.bits()
    }

    pub fn zero(prec: Precision) -> Real {
        Real::from_int(0, prec)
    }

    pub fn one(prec: Precision) -> Real {
        Real::from_int(1, prec)
    }

    pub fn from_int(n: i64, prec: Precision) -> Real {
        let bits = prec.bits();
        Real::wrap(BigFloat::from_i64(n, bits.max(64)), prec)
    }

    pub fn from_ratio(num: i64, den: i64, prec: Precision) -> Real {
        Real::from_int(num, prec) / Real::from_int(den, prec)
    }

    pub fn from_f64(x: f64, prec: Precision) -> Real {
        let bits = prec.bits();
        Real::wrap(BigFloat::from_f64(x, bits), prec)
    }

    /// Parses a decimal string such as `-1.25e-3` or `42`.
    pub fn parse(s: &str, prec: Precision) -> Result<Real> {
        let s = s.trim();
        let valid = !s.is_empty()
            && s.chars().all(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.' | 'e' | 'E'))
            && s.chars().any(|c| c.is_ascii_digit());
        if !valid {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let bits = prec.bits();
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits, RM, cc));
        if v.is_nan() || v.is_inf() {
            return Err(Error::Parse(format!("not a finite decimal number: {s:?}")));
        }
        Ok(Real::wrap(v, prec))
    }

    pub fn pi(prec: Precision) -> Real {
        let bits = prec.bits();
        Real::wrap(with_consts(|cc| cc.pi(bits, RM)), prec)
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Same value carried at another precision.
    pub fn with_precision(&self, prec: Precision) -> Real {
        let bits = prec.bits();
        let mut v = self.v.clone();
        if !v.is_zero() {
            v.set_precision(bits, RM).expect("valid precision");
        }
        Real::wrap(v, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn abs(&self) -> Real {
        Real::wrap(self.v.abs(), self.prec)
    }

    pub fn sqrt(&self) -> Real {
        Real::wrap(self.v.sqrt(self.bits(), RM), self.prec)
    }

    pub fn ln(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.ln(self.bits(), RM, cc)), self.prec)
    }

    pub fn exp(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.exp(self.bits(), RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.sin(self.bits(), RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.cos(self.bits(), RM, cc)), self.prec)
    }

    pub fn atan(&self) -> Real {
        Real::wrap(with_consts(|cc| self.v.atan(self.bits(), RM, cc)), self.prec)
    }

    /// Angle of the point `(x, y)` in `(-pi, pi]`.
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let prec = y.precision().max(x.precision());
        if x.is_zero() {
            let half_pi = Real::pi(prec).div_int(2);
            return match y.sign() {
                Ordering::Less => -half_pi,
                Ordering::Greater => half_pi,
                Ordering::Equal => Real::zero(prec),
            };
        }
        let base = (y / x).atan();
        if !x.is_negative() {
            base
        } else if y.is_negative() {
            base - Real::pi(prec)
        } else {
            base + Real::pi(prec)
        }
    }

    /// `self^exponent` for positive `self`.
    ///
    /// Integer exponents go through `powi`; the rest through `exp(e ln x)` with
    /// guard digits, since the library `pow` can spin forever on exactly
    /// representable results.
    pub fn powf(&self, exponent: &Real) -> Real {
        let prec = self.prec.max(exponent.prec);
        let n = exponent.to_f64();
        if n.fract() == 0.0 && n.abs() < 1e15 && (exponent - Real::from_f64(n, prec)).is_zero() {
            return self.with_precision(prec).powi(n as i64);
        }
        let wide = prec.extended(10);
        let e = exponent.with_precision(wide);
        (self.with_precision(wide).ln() * e).exp().with_precision(prec)
    }

    pub fn powi(&self, n: i64) -> Real {
        let p = self.v.powi(n.unsigned_abs() as usize, self.bits(), RM);
        if n < 0 {
            Real::wrap(BigFloat::from_i64(1, 64).div(&p, self.bits(), RM), self.prec)
        } else {
            Real::wrap(p, self.prec)
        }
    }

    pub fn mul_int(&self, n: i64) -> Real {
        Real::wrap(self.v.mul(&BigFloat::from_i64(n, 64), self.bits(), RM), self.prec)
    }

    pub fn div_int(&self, n: i64) -> Real {
        Real::wrap(self.v.div(&BigFloat::from_i64(n, 64), self.bits(), RM), self.prec)
    }

    /// `self += a * b`.
    pub fn add_product(&mut self, a: &Real, b: &Real) {
        let prec = self.prec.max(a.prec).max(b.prec);
        let prod = a.v.mul(&b.v, prec.bits(), RM);
        self.v = self.v.add(&prod, prec.bits(), RM);
        self.prec = prec;
    }

    pub fn sign(&self) -> Ordering {
        if self.v.is_zero() {
            Ordering::Equal
        } else if self.v.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Real>) -> Option<Real> {
        values.into_iter().map(Real::abs).max_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal))
    }

    /// Nearest `f64`; saturates to infinities outside the `f64` range.
    pub fn to_f64(&self) -> f64 {
        let Some((m, _, sign, e, _)) = self.v.as_raw_parts() else {
            return if self.v.is_nan() {
                f64::NAN
            } else if self.v.is_inf_neg() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        };
        if self.v.is_zero() || m.is_empty() {
            return 0.0;
        }
        let word = 2f64.powi(WORD_BIT_SIZE as i32);
        let hi = m[m.len() - 1] as f64;
        let lo = if m.len() > 1 { m[m.len() - 2] as f64 } else { 0.0 };
        let frac = (hi + lo / word) / word;
        let mag = frac * 2f64.powi(e.clamp(-1100, 1100));
        match sign {
            Sign::Neg => -mag,
            Sign::Pos => mag,
        }
    }

    /// `log10 |self|`, or negative infinity for zero.
    pub fn log10_abs(&self) -> f64 {
        let Some((m, _, _, e, _)) = self.v.as_raw_parts() else {
            return f64::INFINITY;
        };
        if self.v.is_zero() || m.is_empty() {
            return f64::NEG_INFINITY;
        }
        let hi = m[m.len() - 1] as f64 / 2f64.powi(WORD_BIT_SIZE as i32);
        (hi.log2() + e as f64) / std::f64::consts::LOG2_10
    }

    /// Decimal scientific notation with exactly `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.v.is_zero() {
            return format!("0.{}e0", "0".repeat(digits - 1));
        }
        let raw = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).expect("finite value formats");
        let (neg, body) = match raw.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, raw.as_str()),
        };
        let (mant, exp) = body.split_once('e').unwrap_or((body, "0"));
        let mut exp: i64 = exp.parse().expect("formatter exponent");
        let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        // formatter emits d.ddd; leading zeros are not expected but normalize anyway
        while ds.len() > 1 && ds[0] == 0 {
            ds.remove(0);
            exp -= 1;
        }
        if ds.len() > digits {
            let round_up = ds[digits] > 5
                || (ds[digits] == 5 && (ds[digits + 1..].iter().any(|&d| d != 0) || ds[digits - 1] % 2 == 1));
            ds.truncate(digits);
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.truncate(digits);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        } else {
            ds.resize(digits, 0);
        }
        let mut out = String::with_capacity(digits + 8);
        if neg {
            out.push('-');
        }
        out.push((b'0' + ds[0]) as char);
        out.push('.');
        if digits > 1 {
            out.extend(ds[1..].iter().map(|&d| (b'0' + d) as char));
        } else {
            out.push('0');
        }
        out.push('e');
        out.push_str(&exp.to_string());
        out
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(24))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(self.precision().digits() as usize);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                let prec = self.prec.max(rhs.prec);
                Real::wrap(self.v.$op(&rhs.v, prec.bits(), RM), prec)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(self.v.neg(), self.prec)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

/// Complex number with [`Real`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Complex {
        let im = Real::zero(re.precision());
        Complex { re, im }
    }

    pub fn zero(prec: Precision) -> Complex {
        Complex::from_real(Real::zero(prec))
    }

    pub fn from_polar(modulus: &Real, phase: &Real) -> Complex {
        Complex::new(modulus * phase.cos(), modulus * phase.sin())
    }

    pub fn precision(&self) -> Precision {
        self.re.precision().max(self.im.precision())
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn arg(&self) -> Real {
        Real::atan2(&self.im, &self.re)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, k: &Real) -> Complex {
        Complex::new(&self.re * k, &self.im * k)
    }

    pub fn recip(&self) -> Complex {
        let d = self.norm_sqr();
        Complex::new(&self.re / &d, -(&self.im / &d))
    }

    /// Principal square root (branch cut on the negative real axis).
    pub fn sqrt(&self) -> Complex {
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        // take the larger component from the non-cancelling sum
        if !self.re.is_negative() {
            let re = ((&r + &self.re).div_int(2)).sqrt();
            let im = &self.im / re.mul_int(2);
            Complex::new(re, im)
        } else {
            let mag = ((&r - &self.re).div_int(2)).sqrt();
            let im = if self.im.is_negative() { -mag } else { mag };
            let re = &self.im / im.mul_int(2);
            Complex::new(re, im)
        }
    }

    /// `log10 |self|`, computed without forming the square root.
    pub fn log10_abs(&self) -> f64 {
        let a = self.re.log10_abs();
        let b = self.im.log10_abs();
        let hi = a.max(b);
        if hi == f64::NEG_INFINITY {
            return hi;
        }
        hi + 0.5 * (1.0 + 10f64.powf(2.0 * (a.min(b) - hi))).log10()
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        self * &o.recip()
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        -&self
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

macro_rules! complex_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<Complex> for Complex {
            type Output = Complex;
            fn $method(self, o: Complex) -> Complex {
                (&self).$method(&o)
            }
        }
        impl $trait<&Complex> for Complex {
            type Output = Complex;
            fn $method(self, o: &Complex) -> Complex {
                (&self).$method(o)
            }
        }
    };
}

complex_owned!(Add, add);
complex_owned!(Sub, sub);
complex_owned!(Mul, mul);
complex_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    const P: Precision = Precision::from_digits(60);

    #[test]
    fn sci_string_rounds_to_requested_digits() {
        let third = Real::from_ratio(1, 3, P);
        assert_eq!(third.to_sci_string(5), "3.3333e-1");
        let two_thirds = Real::from_ratio(-2, 3, P);
        assert_eq!(two_thirds.to_sci_string(4), "-6.667e-1");
        let nines = Real::parse("9.9996", P).unwrap();
        assert_eq!(nines.to_sci_string(4), "1.000e1");
        assert_eq!(Real::zero(P).to_sci_string(3), "0.00e0");
    }

    #[test]
    fn decimal_round_trip_is_stable() {
        let x = Real::pi(P) / Real::from_int(7, P);
        let s = x.to_sci_string(60);
        let y = Real::parse(&s, P).unwrap();
        assert_eq!(y.to_sci_string(60), s);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Real::parse("1.2x", P).is_err());
        assert!(Real::parse("", P).is_err());
        assert!(Real::parse("e", P).is_err());
    }

    #[test]
    fn f64_conversion_and_magnitude() {
        let x = Real::from_ratio(-3, 8, P);
        assert_eq!(x.to_f64(), -0.375);
        let big = Real::from_int(10, P).powi(40);
        assert!((big.log10_abs() - 40.0).abs() < 1e-12);
        assert!((Real::from_int(10, P).powi(-3).to_f64() - 1e-3).abs() < 1e-18);
    }

    #[test]
    fn atan2_quadrants() {
        let one = Real::one(P);
        let pi = Real::pi(P);
        let q2 = Real::atan2(&one, &-&one);
        assert!((q2 - pi.mul_int(3).div_int(4)).abs().log10_abs() < -55.0);
        let q3 = Real::atan2(&-&one, &-&one);
        assert!((q3 + pi.mul_int(3).div_int(4)).abs().log10_abs() < -55.0);
    }

    #[test]
    fn complex_sqrt_is_principal() {
        let z = Complex::new(Real::from_int(-4, P), Real::zero(P));
        let r = z.sqrt();
        assert!(r.re.abs().log10_abs() < -50.0);
        assert_eq!(r.im.to_f64(), 2.0);
        let w = Complex::new(Real::from_int(3, P), Real::from_int(-4, P));
        let s = w.sqrt();
        assert!(((&s * &s) - w).abs().log10_abs() < -55.0);
        assert!(s.im.is_negative());
    }

    #[test]
    fn mixed_precision_takes_larger() {
        let lo = Real::from_int(1, Precision::from_digits(20));
        let hi = Real::from_int(3, Precision::from_digits(100));
        assert_eq!((&lo / &hi).precision(), hi.precision());
        let z = Real::zero(Precision::from_digits(100)) + lo;
        assert_eq!(z.precision().digits(), 100);
    }
}
