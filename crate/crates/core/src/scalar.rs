//! Coefficient arithmetic shared by the exact and floating-point pipelines.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu_int::{IBig, UBig};
use dashu_ratio::RBig;

use crate::error::{Error, Result};
use crate::real::{Precision, Real};

/// Field operations needed by the perturbation recursion.
///
/// Implemented for exact [`Rational`] numbers and for [`Real`]. The context
/// type carries whatever a constant needs to be materialized (the working
/// precision for reals, nothing for rationals).
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    type Ctx: Copy + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn from_ratio(num: i64, den: i64, ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    /// `log10 |x|`; negative infinity for zero.
    fn log10_abs(&self) -> f64;
    fn to_real(&self, prec: Precision) -> Real;
    /// Decimal digits carried by a floating value; `None` for exact values.
    fn working_digits(&self) -> Option<u32>;

    /// Zero for exact values; below `10^(-P/2)` in magnitude at `P` digits.
    fn is_negligible(&self) -> bool {
        match self.working_digits() {
            None => self.is_zero(),
            Some(p) => self.log10_abs() < -(p as f64) / 2.0,
        }
    }

    fn zero(ctx: Self::Ctx) -> Self {
        Self::from_ratio(0, 1, ctx)
    }

    fn from_int(n: i64, ctx: Self::Ctx) -> Self {
        Self::from_ratio(n, 1, ctx)
    }

    fn scale_int(&self, n: i64) -> Self {
        self.clone() * Self::from_int(n, self.ctx())
    }
}

impl Scalar for Real {
    type Ctx = Precision;

    fn ctx(&self) -> Precision {
        self.precision()
    }

    fn from_ratio(num: i64, den: i64, ctx: Precision) -> Real {
        if den == 1 {
            Real::from_int(num, ctx)
        } else {
            Real::from_ratio(num, den, ctx)
        }
    }

    fn is_zero(&self) -> bool {
        Real::is_zero(self)
    }

    fn log10_abs(&self) -> f64 {
        Real::log10_abs(self)
    }

    fn to_real(&self, prec: Precision) -> Real {
        self.with_precision(prec)
    }

    fn working_digits(&self) -> Option<u32> {
        Some(self.precision().digits())
    }

    fn scale_int(&self, n: i64) -> Real {
        self.mul_int(n)
    }
}

/// Exact rational number.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(RBig);

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational(RBig::from_parts_signed(IBig::from(num), IBig::from(den)))
    }

    pub fn from_parts(num: IBig, den: UBig) -> Rational {
        Rational(RBig::from_parts(num, den))
    }

    pub fn numerator(&self) -> &IBig {
        self.0.numerator()
    }

    pub fn denominator(&self) -> &UBig {
        self.0.denominator()
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Always `numerator/denominator`, including integers (`2/1`).
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numerator(), self.0.denominator())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational> {
        let s = s.trim();
        let (n, d) = s.split_once('/').unwrap_or((s, "1"));
        let num = IBig::from_str(n.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let den = IBig::from_str(d.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if den == IBig::ZERO {
            return Err(Error::Parse(format!("{s:?}: zero denominator")));
        }
        Ok(Rational(RBig::from_parts_signed(num, den)))
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Scalar for Rational {
    type Ctx = ();

    fn ctx(&self) {}

    fn from_ratio(num: i64, den: i64, _: ()) -> Rational {
        Rational::new(num, den)
    }

    fn is_zero(&self) -> bool {
        self.0 == RBig::ZERO
    }

    fn log10_abs(&self) -> f64 {
        if Scalar::is_zero(self) {
            return f64::NEG_INFINITY;
        }
        self.to_real(Precision::from_digits(20)).log10_abs()
    }

    fn to_real(&self, prec: Precision) -> Real {
        let num = Real::parse(&self.0.numerator().to_string(), prec).expect("integer literal");
        let den = Real::parse(&self.0.denominator().to_string(), prec).expect("integer literal");
        num / den
    }

    fn working_digits(&self) -> Option<u32> {
        None
    }
}
