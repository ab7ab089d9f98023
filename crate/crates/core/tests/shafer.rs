use cycle_scope::resum::{xi_series, XiMap};
use cycle_scope::seriesgen::{PowerSeries, Variable};
use cycle_scope::shafer::*;
use cycle_scope::{Complex, Error, Precision, Real};

const P: Precision = Precision::from_digits(80);

fn nu_series(c: Vec<Real>) -> PowerSeries<Real> {
    PowerSeries::new(Variable::Nu, c)
}

/// Taylor coefficients of `(1 + s nu)^a` for rational `a`.
fn binomial(a: (i64, i64), s: i64, len: usize) -> Vec<Real> {
    let a = Real::from_ratio(a.0, a.1, P);
    let mut out = vec![Real::one(P)];
    for n in 1..len {
        let prev = out[n - 1].clone();
        let k = Real::from_int(n as i64 - 1, P);
        out.push(prev * (&a - k) * Real::from_int(s, P) / Real::from_int(n as i64, P));
    }
    out
}

fn cauchy(a: &[Real], b: &[Real]) -> Vec<Real> {
    (0..a.len().min(b.len()))
        .map(|n| {
            let mut acc = Real::zero(P);
            for i in 0..=n {
                acc.add_product(&a[i], &b[n - i]);
            }
            acc
        })
        .collect()
}

/// `sqrt(1 - 2 nu cos(phi)/R + nu^2/R^2) * exp(nu/5)`: square-root branch
/// points at `R e^(+-i phi)` and no finite algebraic form.
fn synthetic(r: &Real, phi: &Real, len: usize) -> PowerSeries<Real> {
    let map = XiMap::new(r.clone(), phi.clone()).unwrap();
    let root: Vec<Real> = xi_series(&map, (2, 1), len).coeffs().iter().map(|c| c / r).collect();
    let mut e = vec![Real::one(P)];
    for n in 1..len {
        let prev = e[n - 1].clone();
        e.push(prev / Real::from_int(5 * n as i64, P));
    }
    nu_series(cauchy(&root, &e))
}

fn close(a: &Real, b: &Real, digits: f64) -> bool {
    (a - b).log10_abs() < -digits
}

#[test]
fn square_root_of_linear_falls_back_to_p_normalization() {
    let f = nu_series(binomial((1, 2), 1, 4));
    let mut app = build_shafer(&f, 1, 0, 1).unwrap();
    assert_eq!(app.normalization, Normalization::PConstant);
    let disc = discriminant(&app);
    let roots = poly_roots(&disc, 80).unwrap().into_converged().unwrap();
    assert_eq!(roots.len(), 1);
    assert!(close(&roots[0].re, &Real::from_int(-1, P), 60.0));
    assert_eq!(branch_select(&mut app, &f).unwrap(), BranchSign::Plus);
    let v = app.evaluate_real(&Real::from_int(3, P)).unwrap();
    assert!(close(&v, &Real::from_int(2, P), 60.0));
}

#[test]
fn negated_series_selects_the_other_root() {
    let c: Vec<Real> = binomial((1, 2), 1, 4).into_iter().map(|c| -c).collect();
    let f = nu_series(c);
    let mut app = build_shafer(&f, 1, 0, 1).unwrap();
    assert_eq!(branch_select(&mut app, &f).unwrap(), BranchSign::Minus);
    let v = evaluate_shafer(&app, &Complex::from_real(Real::from_int(3, P))).unwrap();
    assert!(close(&v.re, &Real::from_int(-2, P), 60.0));
}

#[test]
fn rational_function_is_reproduced() {
    // 1/(1 - nu) with (K, L, M) = (0, 1, 0): Q = 1 - nu, R = -1, P = 0
    let f = nu_series(vec![Real::one(P); 3]);
    let mut app = build_shafer(&f, 0, 1, 0).unwrap();
    assert_eq!(app.normalization, Normalization::QConstant);
    let disc = discriminant(&app);
    let want = [1, -2, 1];
    for (c, w) in disc.coeffs().iter().zip(want) {
        assert!(close(c, &Real::from_int(w, P), 70.0));
    }
    branch_select(&mut app, &f).unwrap();
    let v = app.evaluate_real(&Real::from_int(-1, P)).unwrap();
    assert!(close(&v, &Real::from_ratio(1, 2, P), 70.0));
}

#[test]
fn approximant_reexpands_to_its_input() {
    let r = Real::from_int(3, P);
    let phi = Real::from_ratio(6, 5, P);
    let k = 6;
    let f = synthetic(&r, &phi, 3 * k + 2);
    let app = fit_diagonal(&f, k).unwrap();
    let back = app.reexpand(3 * k + 2).unwrap();
    for (n, (a, b)) in back.iter().zip(f.coeffs()).enumerate() {
        let rel = ((a - b) / b).log10_abs();
        assert!(rel < -(P.digits() as f64) / 3.0, "order {n}: {rel}");
    }
    let v = app.evaluate(&Complex::zero(P)).unwrap();
    assert!(close(&v.re, &f.coeffs()[0], 70.0));
}

#[test]
fn discriminant_roots_come_in_conjugate_pairs() {
    let f = synthetic(&Real::from_int(3, P), &Real::from_ratio(6, 5, P), 26);
    let app = build_shafer(&f, 8, 8, 8).unwrap();
    let roots = poly_roots(&discriminant(&app), 80).unwrap().into_converged().unwrap();
    for z in &roots {
        let partner = roots.iter().map(|w| (w - &z.conj()).log10_abs()).fold(f64::INFINITY, f64::min);
        assert!(partner < -30.0, "unpaired root {:e}{:+e}i", z.re.to_f64(), z.im.to_f64());
    }
}

#[test]
fn synthetic_branch_point_is_located() {
    let r = Real::from_int(3, P);
    let phi = Real::from_ratio(6, 5, P);
    let ks = [6, 10, 14];
    let f = synthetic(&r, &phi, 3 * 15 + 2);
    let rows = estimate_branch_point(&f, &ks, 1e-6).unwrap();
    let mut prev = f64::INFINITY;
    for (k, row) in &rows {
        let e = row.as_ref().unwrap_or_else(|err| panic!("K={k}: {err}"));
        let err = (&e.modulus - &r).log10_abs().max((&e.phase - &phi).log10_abs());
        assert!(err < prev, "K={k} did not improve");
        prev = err;
    }
    assert!(prev < -15.0, "K=14 reached only 10^{prev}");
    let best = rows.last().unwrap().1.as_ref().unwrap();
    assert!(best.delta_modulus.is_zero());
    assert!(best.persistence.count() >= 2);
}

#[test]
fn normalizations_agree() {
    let r = Real::from_int(3, P);
    let phi = Real::from_ratio(6, 5, P);
    let f = synthetic(&r, &phi, 40);
    let near = |norm: Normalization| {
        let app = build_shafer_with(&f, 10, 10, 10, norm).unwrap();
        let roots = poly_roots(&discriminant(&app), 80).unwrap().roots;
        let target = Complex::from_polar(&r, &phi);
        roots.into_iter().min_by(|a, b| (a - &target).abs().partial_cmp(&(b - &target).abs()).unwrap()).unwrap()
    };
    let a = near(Normalization::QConstant);
    let b = near(Normalization::PConstant);
    assert!((&a - &b).log10_abs() < -15.0);
}

#[test]
fn persistence_rejects_clutter() {
    let pair = |re: f64, im: f64| {
        [
            Complex::new(Real::from_f64(re, P), Real::from_f64(im, P)),
            Complex::new(Real::from_f64(re, P), Real::from_f64(-im, P)),
        ]
    };
    let mut k: Vec<Complex> = pair(-0.7, 3.3).to_vec();
    let mut k1 = k.clone();
    k.extend(pair(0.5, 0.4));
    k1.extend(pair(1.5, -2.0));
    k.extend(pair(4.0, 0.1));
    k1.extend(pair(-3.0, 0.9));
    let (p, nu) = persistence_filter(&k, &k1, 1e-8).unwrap();
    assert_eq!(p.count(), 2);
    assert!(close(&nu.im, &Real::from_f64(3.3, P), 70.0));

    let (p, nu) = persistence_filter(&k, &k, 1e-8).unwrap();
    assert!(p.distances.iter().all(Real::is_zero));
    // smallest-modulus conjugate pair wins
    assert!(close(&nu.re, &Real::from_f64(0.5, P), 70.0));

    assert!(matches!(persistence_filter(&k, &k1[2..], 1e-8), Err(Error::NoPersistentPair)));
}

#[test]
fn square_and_cube_root_exponents() {
    let one = Complex::from_real(Real::one(P));
    let f = nu_series(binomial((1, 2), -1, 44));
    let p = exponent_estimate(&f, &one, 20).unwrap();
    assert!((p.re.to_f64() - 0.5).abs() < 1e-4 && p.im.to_f64().abs() < 1e-4);
    let f = nu_series(binomial((1, 3), -1, 44));
    let p = exponent_estimate(&f, &one, 20).unwrap();
    assert!((p.re.to_f64() - 1.0 / 3.0).abs() < 1e-4);
}

#[test]
fn exponent_far_from_any_pole_is_inconclusive() {
    let f = nu_series(binomial((1, 2), -1, 44));
    let far = Complex::from_real(Real::from_int(5, P));
    assert!(matches!(exponent_estimate(&f, &far, 20), Err(Error::Inconclusive { .. })));
}

#[test]
fn suetin_distances() {
    let pi = Real::pi(P);
    let e = BranchPointEstimate::from_polar(Real::from_ratio(342, 100, P), pi.mul_int(89).div_int(156), 1);
    let (dr, dphi) = suetin_check(&e);
    assert!(dr.is_zero() || dr.log10_abs() < -70.0);
    assert!(dphi.is_zero() || dphi.log10_abs() < -70.0);
}

#[test]
fn too_few_coefficients() {
    let f = nu_series(binomial((1, 2), 1, 10));
    assert!(matches!(
        estimate_branch_point(&f, &[20], 1e-8),
        Err(Error::InsufficientCoefficients { .. })
    ));
    assert!(matches!(build_shafer(&f, 5, 5, 5), Err(Error::InsufficientCoefficients { .. })));
}

#[test]
fn reports_have_stable_headers() {
    let f = synthetic(&Real::from_int(3, P), &Real::from_ratio(6, 5, P), 3 * 7 + 2);
    let rows = estimate_branch_point(&f, &[6], 1e-6).unwrap();
    assert!(branch_report_csv(&rows).starts_with("K,R,phi,delta_R,delta_phi,n_persistent_roots"));
    assert!(root_cloud_csv(&rows).starts_with("K,re,im,persistent"));
    assert_eq!(root_cloud_csv(&rows).lines().count(), 1 + 12);
    assert!(persistence_csv(&rows).lines().count() > 1);
}
