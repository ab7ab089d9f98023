use std::sync::OnceLock;

use cycle_scope::resum::*;
use cycle_scope::seriesgen::{generate_float, period_series, PowerSeries, Quantity, Variable};
use cycle_scope::{Error, Precision, Real};

const P: Precision = Precision::from_digits(100);

/// Period and amplitude in `nu` through 31 terms at 100 digits.
fn lp() -> &'static (PowerSeries<Real>, PowerSeries<Real>) {
    static CELL: OnceLock<(PowerSeries<Real>, PowerSeries<Real>)> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = generate_float(60, P).unwrap();
        let t = period_series(&s.omega.to_nu().unwrap()).unwrap();
        (t, s.amplitude.to_nu().unwrap())
    })
}

/// Branch pair close to the one of the period series.
fn map() -> XiMap {
    XiMap::new(Real::parse("3.4", P).unwrap(), Real::parse("1.79", P).unwrap()).unwrap()
}

fn taylor(c: &[Real], x: &Real) -> Real {
    c.iter().rev().fold(Real::zero(x.precision()), |acc, c| acc * x + c)
}

fn rel(a: &Real, b: &Real) -> f64 {
    ((a - b) / b).log10_abs()
}

#[test]
fn xi_at_a_right_angle() {
    let m = XiMap::new(Real::from_int(2, P), Real::pi(P).div_int(2)).unwrap();
    let nu = Real::from_int(2, P);
    // quartic = 4 + 4
    let eight = Real::from_int(8, P);
    assert!(rel(&m.log_xi(&nu), &eight.ln().div_int(4)) < -95.0);
    assert!(rel(&m.xi_pow(&nu, (4, 1)), &eight) < -95.0);
    assert!(rel(&m.xi(&Real::zero(P)), &Real::from_int(2, P).sqrt()) < -95.0);
}

#[test]
fn xi_series_sum_to_closed_form() {
    let m = map();
    let nu = Real::parse("0.2", P).unwrap();
    for s in [(1, 1), (-1, 3), (-4, 3), (-2, 1), (0, 1)] {
        let c = xi_series(&m, s, 120);
        assert!(rel(&taylor(c.coeffs(), &nu), &m.xi_pow(&nu, s)) < -90.0, "s = {s:?}");
    }
    let l = log_xi_series(&m, 120);
    assert!(rel(&taylor(l.coeffs(), &nu), &m.log_xi(&nu)) < -90.0);
}

#[test]
fn xi_map_rejects_bad_branch_points() {
    let one = Real::one(P);
    assert!(XiMap::new(Real::zero(P), one.clone()).is_err());
    assert!(XiMap::new(one.clone(), Real::zero(P)).is_err());
    assert!(XiMap::new(one, Real::pi(P)).is_err());
}

#[test]
fn constants() {
    let c = AsymptoticConstants::new(P).unwrap();
    assert_eq!(c.airy_alpha.to_sci_string(12), "-2.33810741046e0");
    assert_eq!(c.c_t.to_sci_string(5), "1.3246e0");
    assert_eq!(c.beta.to_sci_string(4), "1.723e-1");
    assert!((c.three_minus_log4().to_f64() - (3.0 - 4f64.ln())).abs() < 1e-15);
    let (ai, dai) = airy_ai(&c.airy_alpha);
    assert!(ai.log10_abs() < -90.0 && dai.to_f64() > 0.7);
}

#[test]
fn reconstitution_undoes_depuration() {
    let (t, a) = lp();
    let m = map();
    let c = AsymptoticConstants::new(P).unwrap();
    let nu = Real::parse("0.25", P).unwrap();
    let gamma = Real::parse("-0.3", P).unwrap();

    let terms = period_terms(&m, &c, &gamma);
    let dep = depurate(t, &m, &terms).unwrap();
    let back = taylor(dep.coeffs(), &nu) + reconstitute(&m, &terms, &nu);
    assert!(rel(&back, &taylor(t.coeffs(), &nu)) < -30.0);

    for form in [AmplitudeForm::Expansion, AmplitudeForm::Flipped] {
        let terms = amplitude_terms(&c, form);
        let dep = depurate_amplitude(a, &m, &c, form).unwrap();
        let back = taylor(dep.coeffs(), &nu) + reconstitute(&m, &terms, &nu);
        assert!(rel(&back, &taylor(a.coeffs(), &nu)) < -30.0);
    }
}

#[test]
fn depuration_needs_a_nu_series() {
    let s = PowerSeries::new(Variable::Mu, vec![Real::one(P); 4]);
    let c = AsymptoticConstants::new(P).unwrap();
    assert!(depurate_amplitude(&s, &map(), &c, AmplitudeForm::Expansion).is_err());
}

#[test]
fn pade_reexpands_the_depurated_series() {
    let (t, _) = lp();
    let m = map();
    let c = AsymptoticConstants::new(P).unwrap();
    let zero = Real::zero(P);
    let r = Resummation::period(t, &m, &c, &zero, 14).unwrap();
    assert_eq!(r.pade().orders, (14, 15));
    let dep = depurate_period(t, &m, &c, &zero).unwrap();
    let back = r.pade().reexpand(30);
    for (n, (x, y)) in back.iter().zip(dep.coeffs()).enumerate() {
        assert!((x - y).log10_abs() - y.log10_abs().max(0.0) < -60.0, "order {n}");
    }
}

#[test]
fn inside_the_radius_resummation_equals_the_sum() {
    let (t, a) = lp();
    let m = map();
    let c = AsymptoticConstants::new(P).unwrap();
    let mu = Real::parse("0.5", P).unwrap();
    let nu = &mu * &mu;
    let tr = resummed_period(&nu, t, &m, &c, &Real::zero(P), 14).unwrap();
    assert_eq!(tr.quantity, Quantity::Period);
    assert!(tr.gamma.is_some());
    assert!(rel(&tr.value, &taylor(t.coeffs(), &nu)) < -30.0);
    let ar = resummed_amplitude(&nu, a, &m, &c, AmplitudeForm::Expansion, 15).unwrap();
    assert_eq!(ar.pade_orders, (13, 15));
    assert!(ar.gamma.is_none());
    assert!(rel(&ar.value, &taylor(a.coeffs(), &nu)) < -30.0);
}

#[test]
fn invalid_resummation_requests() {
    let (t, a) = lp();
    let m = map();
    let c = AsymptoticConstants::new(P).unwrap();
    let r = Resummation::period(t, &m, &c, &Real::zero(P), 10).unwrap();
    assert!(r.evaluate(&Real::from_int(-1, P)).is_err());
    assert!(Resummation::amplitude(a, &m, &c, AmplitudeForm::Expansion, 1).is_err());
    assert!(matches!(
        Resummation::period(t, &m, &c, &Real::zero(P), 40),
        Err(Error::InsufficientCoefficients { .. })
    ));
}

#[test]
fn gamma_sweep_reports_every_grid_point() {
    let (t, _) = lp();
    let m = map();
    let c = AsymptoticConstants::new(P).unwrap();
    let mu = Real::from_int(1, P);
    let reference = taylor(t.coeffs(), &Real::one(P));
    let grid = linear_grid(&Real::from_int(-1, P), &Real::parse("0.5", P).unwrap(), 7);
    assert!(rel(&grid[2], &Real::parse("-0.5", P).unwrap()) < -95.0);
    let sweep = gamma_sweep(&mu, &grid, t, &m, &c, 14, &reference);
    assert_eq!(sweep.rows.len(), 7);
    assert!(sweep.best().is_some());
    let csv = sweep.to_csv();
    assert!(csv.starts_with("gamma,rel_err,error\n"));
    assert_eq!(csv.lines().count(), 8);
    assert!(linear_grid(&grid[0], &grid[1], 0).is_empty());
}

#[test]
fn config_round_trip_and_overrides() {
    let text = "# branch point\nR=3.42\nphi=1.7957\nK=50\nprecision_digits=250\n";
    let cfg = ResumConfig::parse(text).unwrap();
    assert_eq!(cfg.order, Some(50));
    let again = ResumConfig::parse(&cfg.to_text()).unwrap();
    assert_eq!(again.to_text(), cfg.to_text());

    let over = ResumConfig::parse("gamma=-0.25\nc_T=1.5\n").unwrap();
    let merged = cfg.merged(&over);
    assert_eq!(merged.modulus.as_deref(), Some("3.42"));
    assert!(rel(&merged.gamma(P).unwrap(), &Real::parse("-0.25", P).unwrap()) < -95.0);
    assert_eq!(merged.constants(P).unwrap().c_t.to_sci_string(2), "1.5e0");
    merged.xi_map(P).unwrap();

    assert!(ResumConfig::default().gamma(P).unwrap().is_zero());
    assert!(ResumConfig::default().xi_map(P).is_err());
    assert!(matches!(ResumConfig::parse("Q=1"), Err(Error::Parse(_))));
    assert!(matches!(ResumConfig::parse("R"), Err(Error::Parse(_))));
}
