use cycle_scope::seriesgen::*;
use cycle_scope::{Error, Precision, Rational, Real, Scalar};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn exact_low_orders_match_hand_values() {
    let s = generate_exact(8).unwrap();
    let w = s.omega.coeffs();
    let a = s.amplitude.coeffs();
    assert_eq!(w[0], q(1, 1));
    assert_eq!(a[0], q(2, 1));
    assert_eq!(w[2], q(-1, 16));
    assert_eq!(a[2], q(1, 96));
    assert_eq!(w[4], q(17, 3072));
    assert_eq!(a[4], q(-1033, 552960));
    assert_eq!(w[6], q(35, 884736));
    assert_eq!(a[6], rat("1019689/55738368000"));
    assert_eq!(w[8], rat("-678899/5096079360"));
    assert_eq!(a[8], rat("9835512276689/157315969843200000"));
}

#[test]
fn first_order_solution() {
    let s = generate_exact(1).unwrap();
    let y1 = &s.solutions[1];
    assert_eq!(s.amplitude.coeffs()[1], q(0, 1));
    assert_eq!(y1.cos_coeff(1), Some(&q(0, 1)));
    assert_eq!(y1.sin_coeff(1), Some(&q(3, 4)));
    assert_eq!(y1.sin_coeff(3), Some(&q(-1, 4)));
    assert_eq!(y1.degree(), 3);
}

#[test]
fn odd_orders_vanish_exactly() {
    let s = generate_exact(31).unwrap();
    for n in (1..=31).step_by(2) {
        assert!(s.omega.coeffs()[n].is_zero(), "omega_{n}");
        assert!(s.amplitude.coeffs()[n].is_zero(), "a_{n}");
    }
}

#[test]
fn order_zero_is_the_harmonic_oscillator() {
    let s = generate_exact(0).unwrap();
    assert_eq!(s.omega.coeffs(), &[q(1, 1)]);
    assert_eq!(s.amplitude.coeffs(), &[q(2, 1)]);
}

#[test]
fn initial_conditions_hold_at_every_order() {
    let s = generate_exact(10).unwrap();
    for (n, y) in s.solutions.iter().enumerate() {
        assert_eq!(y.value_at_zero(), s.amplitude.coeffs()[n], "y_{n}(0)");
        assert!(y.slope_at_zero().is_zero(), "y_{n}'(0)");
    }
}

/// Substitutes the truncated solution into
/// `Omega^2 y'' + y - mu Omega (y' - y^2 y')` at sample phases and checks
/// every order vanishes.
#[test]
fn truncated_solution_satisfies_the_ode_order_by_order() {
    let order = 12;
    let p = Precision::from_digits(60);
    let s = generate_exact(order).unwrap();
    let w: Vec<Real> = s.omega.coeffs().iter().map(|c| c.to_real(p)).collect();
    let cauchy = |a: &[Real], b: &[Real], n: usize| {
        let mut acc = Real::zero(p);
        for i in 0..=n {
            acc.add_product(&a[i], &b[n - i]);
        }
        acc
    };
    let ww: Vec<Real> = (0..=order).map(|n| cauchy(&w, &w, n)).collect();
    for tau in ["0.3", "1.1", "2.9", "5.0"] {
        let tau = Real::parse(tau, p).unwrap();
        let yr: Vec<_> = s.solutions.iter().map(|y| y.map(|c| c.to_real(p))).collect();
        let y: Vec<Real> = yr.iter().map(|y| y.evaluate(&tau)).collect();
        let y1: Vec<Real> = yr.iter().map(|y| y.derivative().evaluate(&tau)).collect();
        let y2: Vec<Real> = yr.iter().map(|y| y.second_derivative().evaluate(&tau)).collect();
        let sq: Vec<Real> = (0..=order).map(|n| cauchy(&y, &y, n)).collect();
        let sqd: Vec<Real> = (0..=order).map(|n| cauchy(&sq, &y1, n)).collect();
        let inner: Vec<Real> = (0..=order).map(|n| &y1[n] - &sqd[n]).collect();
        for (m, ym) in y.iter().enumerate() {
            let mut res = cauchy(&ww, &y2, m) + ym;
            if m > 0 {
                res = res - cauchy(&w, &inner, m - 1);
            }
            assert!(res.log10_abs() < -50.0, "order {m}: residual {:e}", res.to_f64());
        }
    }
}

#[test]
fn float_agrees_with_exact() {
    let p = Precision::from_digits(80);
    let e = generate_exact(24).unwrap();
    let f = generate_float(24, p).unwrap();
    for (ex, fl) in e.omega.coeffs().iter().zip(f.omega.coeffs()) {
        let d = ex.to_real(p) - fl;
        assert!(d.log10_abs() < -70.0 || d.is_zero());
    }
    for (n, fl) in f.amplitude.coeffs().iter().enumerate().skip(1).step_by(2) {
        assert!(fl.is_zero() || fl.log10_abs() < -(p.digits() as f64) + 10.0, "a_{n}");
    }
}

#[test]
fn float_precision_floor() {
    let err = generate_float(4, Precision::from_digits(30)).unwrap_err();
    assert!(err.is_precondition());
}

#[test]
fn period_series_starts_at_two_pi() {
    let p = Precision::from_digits(60);
    let f = generate_float(8, p).unwrap();
    let t = period_series(&f.omega.to_nu().unwrap()).unwrap();
    assert!((&t.coeffs()[0] - Real::pi(p).mul_int(2)).log10_abs() < -55.0);
    // T = 2 pi / Omega, Omega = 1 - nu/16 + ...  =>  T_1 = 2 pi / 16
    assert!((&t.coeffs()[1] - Real::pi(p).div_int(8)).log10_abs() < -55.0);
}

#[test]
fn coefficient_files_round_trip() {
    let e = generate_exact(6).unwrap();
    let file = CoeffFile::from_rational(Quantity::Omega, &e.omega);
    let back = CoeffFile::parse(&file.to_text()).unwrap();
    assert_eq!(back, file);
    assert_eq!(back.to_rational_series().unwrap().coeffs(), e.omega.coeffs());

    let p = Precision::from_digits(120);
    let f = generate_float(10, p).unwrap();
    let file = CoeffFile::from_real(Quantity::Amplitude, &f.amplitude);
    let text = file.to_text();
    let back = CoeffFile::parse(&text).unwrap();
    assert_eq!(back.to_text(), text);
    let series = back.to_real_series(None).unwrap();
    for (a, b) in series.coeffs().iter().zip(f.amplitude.coeffs()) {
        assert!((a - b).is_zero() || (a - b).log10_abs() < -118.0);
    }
}

#[test]
fn malformed_file_is_a_parse_error() {
    let err = CoeffFile::parse("# quantity=omega\n1\nnot-a-number\n").unwrap_err();
    assert!(matches!(err, Error::Parse(_)));
}

#[test]
fn digit_loss_points_decline() {
    let e = generate_exact(40).unwrap();
    let f = generate_float(40, Precision::from_digits(60)).unwrap();
    let d = digit_loss_diagnostic(&e.omega, &f.omega).unwrap();
    assert!(!d.points.is_empty());
    assert!(d.points.iter().all(|&(_, digits)| digits <= Precision::from_digits(60).effective_digits()));
    let first = d.points.first().unwrap().1;
    let last = d.points.last().unwrap().1;
    assert!(last < first);
}
