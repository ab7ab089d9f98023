use crate::error::{Error, Result};
use crate::real::{Precision, Real};

/// `Gamma(s)` for `0 < s < 1` from the lower incomplete gamma series
/// `gamma(s, X) = X^s e^-X sum_n X^n / (s (s+1) ... (s+n))`, with `X` large
/// enough that the upper tail `Gamma(s, X)` is below working precision.
pub fn gamma_fraction(s: &Real) -> Real {
    let prec = s.precision();
    let digits = prec.effective_digits();
    let x = Real::from_f64((digits + 5.0) * std::f64::consts::LN_10 + 10.0, prec);
    let threshold = -digits - 5.0;
    let mut term = Real::one(prec) / s;
    let mut sum = term.clone();
    let mut denom = s.clone();
    loop {
        denom = denom + Real::one(prec);
        term = term * &x / &denom;
        sum = sum + &term;
        if term.log10_abs() - sum.log10_abs() < threshold {
            break;
        }
    }
    sum * x.powf(s) * (-x).exp()
}

/// `(Ai(x), Ai'(x))` from the Maclaurin series; accurate for `|x| <= 3`
/// when `prec` carries a few guard digits.
pub fn airy_ai(x: &Real) -> (Real, Real) {
    let prec = x.precision();
    let third = Real::from_ratio(1, 3, prec);
    let g13 = gamma_fraction(&third);
    let g23 = Real::pi(prec).mul_int(2) / (Real::from_int(3, prec).sqrt() * &g13);
    // Ai(0) = 3^(-2/3) / Gamma(2/3), -Ai'(0) = 3^(-1/3) / Gamma(1/3)
    let three = Real::from_int(3, prec);
    let c1 = three.powf(&(-third.mul_int(2))) / g23;
    let c2 = three.powf(&(-&third)) / g13;

    let x3 = x.powi(3);
    let threshold = -prec.effective_digits() - 5.0;
    // f = sum t_k, g = sum u_k; f' picks up t_{k-1} x^2 / (3k-1), g' u_{k-1} x^2 / (3k)
    let (mut t, mut u) = (Real::one(prec), x.clone());
    let (mut f, mut g) = (t.clone(), u.clone());
    let (mut fp, mut gp) = (Real::zero(prec), Real::one(prec));
    let x2 = x * x;
    let mut k: i64 = 0;
    loop {
        fp = fp + &t * &x2 / Real::from_int(3 * k + 2, prec);
        gp = gp + &u * &x2 / Real::from_int(3 * k + 3, prec);
        t = &t * &x3 / Real::from_int((3 * k + 2) * (3 * k + 3), prec);
        u = &u * &x3 / Real::from_int((3 * k + 3) * (3 * k + 4), prec);
        k += 1;
        f = f + &t;
        g = g + &u;
        let small = |v: &Real, s: &Real| v.is_zero() || v.log10_abs() - s.log10_abs().max(0.0) < threshold;
        if small(&t, &f) && small(&u, &g) {
            break;
        }
    }
    (&c1 * &f - &c2 * &g, c1 * fp - c2 * gp)
}

/// First negative zero of `Ai` by Newton iteration from `-2.338`.
pub fn airy_zero(digits: u32) -> Result<Real> {
    if digits < 9 {
        return Err(Error::Precondition(format!("airy_zero needs at least 9 digits, got {digits}")));
    }
    let work = Precision::from_digits(digits + 15);
    let target = -(work.effective_digits() - 10.0);
    let mut x = Real::from_ratio(-2338, 1000, work);
    for _ in 0..100 {
        let (a, da) = airy_ai(&x);
        let step = a / da;
        x = x - &step;
        if step.is_zero() || step.log10_abs() < target {
            return Ok(x.with_precision(Precision::from_digits(digits)));
        }
    }
    Err(Error::NoConvergence("Newton iteration for the Airy zero".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_one_third() {
        let p = Precision::from_digits(60);
        let g = gamma_fraction(&Real::from_ratio(1, 3, p));
        let want = Real::parse("2.678938534707747633655692940974677644128689377957301100950428", p).unwrap();
        assert!((g - want).log10_abs() < -58.0);
    }

    #[test]
    fn airy_at_zero() {
        let p = Precision::from_digits(40);
        let (a, da) = airy_ai(&Real::zero(p));
        assert!((a.to_f64() - 0.355_028_053_887_817_2).abs() < 1e-15);
        assert!((da.to_f64() + 0.258_819_403_792_806_8).abs() < 1e-15);
    }

    #[test]
    fn first_zero_to_one_hundred_digits() {
        // mpmath airyaizero(1) at 110 digits
        let want = "-2.33810741045976703848919725244673544063854014567238785248385443721366800270028364778216404173132932028476";
        let z = airy_zero(100).unwrap();
        let p = Precision::from_digits(100);
        assert!((&z - Real::parse(want, p).unwrap()).log10_abs() < -99.0);
        let (a, _) = airy_ai(&z.with_precision(Precision::from_digits(110)));
        assert!(a.log10_abs() < -98.0);
    }

    #[test]
    fn nine_digit_value() {
        assert_eq!(airy_zero(9).unwrap().to_sci_string(9), "-2.33810741e0");
    }
}
