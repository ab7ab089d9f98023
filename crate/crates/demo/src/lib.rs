//! Browser bindings. Every entry point takes plain numbers and returns a
//! JSON string; the `*_json` functions hold the logic and run natively too.

use cycle_scope::oracle::{integrate, limit_cycle};
use cycle_scope::resum::{AmplitudeForm, AsymptoticConstants, Resummation, XiMap};
use cycle_scope::seriesgen::{generate_exact, generate_float, period_series};
use cycle_scope::shafer::estimate_branch_point;
use cycle_scope::{Precision, Real};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest order the page may request in each mode.
pub const MAX_EXACT_ORDER: usize = 40;
pub const MAX_FLOAT_ORDER: usize = 200;
pub const MAX_BRANCH_ORDER: usize = 16;

type Out = Result<String, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn num(x: &Real, digits: usize) -> Value {
    Value::String(x.to_sci_string(digits))
}

/// Frequency and amplitude coefficients through `order` in `mu`.
pub fn lp_series_json(order: usize, exact: bool, digits: u32) -> Out {
    if exact {
        if order > MAX_EXACT_ORDER {
            return Err(format!("exact mode is limited to order {MAX_EXACT_ORDER} here"));
        }
        let s = generate_exact(order).map_err(err)?;
        let omega: Vec<String> = s.omega.coeffs().iter().map(ToString::to_string).collect();
        let amplitude: Vec<String> = s.amplitude.coeffs().iter().map(ToString::to_string).collect();
        return Ok(json!({ "mode": "exact", "omega": omega, "amplitude": amplitude }).to_string());
    }
    if order > MAX_FLOAT_ORDER {
        return Err(format!("float mode is limited to order {MAX_FLOAT_ORDER} here"));
    }
    let s = generate_float(order, Precision::from_digits(digits)).map_err(err)?;
    let shown = 25;
    let omega: Vec<Value> = s.omega.coeffs().iter().map(|c| num(c, shown)).collect();
    let amplitude: Vec<Value> = s.amplitude.coeffs().iter().map(|c| num(c, shown)).collect();
    Ok(json!({ "mode": "float", "digits": digits, "omega": omega, "amplitude": amplitude }).to_string())
}

/// Branch-point estimate of the period series at diagonal order `k`, with
/// the discriminant roots for plotting. Low orders need a looser
/// persistence tolerance `tol` than the library default.
pub fn branch_point_json(k: usize, digits: u32, tol: f64) -> Out {
    if !(2..=MAX_BRANCH_ORDER).contains(&k) {
        return Err(format!("K must lie in 2..={MAX_BRANCH_ORDER}"));
    }
    let prec = Precision::from_digits(digits);
    let len = 3 * (k + 1) + 2;
    let s = generate_float(2 * (len - 1), prec).map_err(err)?;
    let t = period_series(&s.omega.to_nu().map_err(err)?).map_err(err)?;
    let rows = estimate_branch_point(&t, &[k], tol).map_err(err)?;
    let est = rows.into_iter().next().ok_or("no estimate")?.1.map_err(err)?;
    let roots: Vec<Value> = est
        .persistence
        .roots
        .iter()
        .zip(&est.persistence.persistent)
        .map(|(z, &p)| json!({ "re": z.re.to_f64(), "im": z.im.to_f64(), "persistent": p }))
        .collect();
    Ok(json!({
        "K": k,
        "R": num(&est.modulus, 30),
        "phi": num(&est.phase, 30),
        "coefficients": t.len(),
        "roots": roots,
    })
    .to_string())
}

/// Limit cycle by shooting, `samples` points of the orbit over one period,
/// and the resummed period and amplitude at the same `mu`.
pub fn limit_cycle_json(mu: f64, digits: u32, samples: usize) -> Out {
    if !(mu > 0.0 && mu <= 30.0) {
        return Err("mu must lie in (0, 30]".into());
    }
    let prec = Precision::from_digits(digits);
    let mu_r = Real::from_f64(mu, prec);
    let c = limit_cycle(&mu_r, digits, None).map_err(err)?;
    let n = samples.clamp(16, 2000);
    let dt = c.period.div_int(n as i64);
    let mut x = c.amplitude.clone();
    let mut v = Real::zero(prec);
    let mut orbit = vec![[x.to_f64(), 0.0]];
    for _ in 0..n {
        let e = integrate(&mu_r, &x, &v, &dt, digits).map_err(err)?;
        x = e.x;
        v = e.v;
        orbit.push([x.to_f64(), v.to_f64()]);
    }
    let resummed = resummed_pair(mu, digits).unwrap_or(Value::Null);
    Ok(json!({
        "mu": mu,
        "period": num(&c.period, 20),
        "amplitude": num(&c.amplitude, 20),
        "orbit": orbit,
        "resummed": resummed,
    })
    .to_string())
}

/// `[12, 13]` period and `[12, 14]` amplitude resummation with a fixed
/// branch point, good to several digits over the page's `mu` range.
fn resummed_pair(mu: f64, digits: u32) -> Option<Value> {
    let prec = Precision::from_digits(digits.max(60));
    let m = 12;
    let s = generate_float(4 * m + 6, prec).ok()?;
    let t = period_series(&s.omega.to_nu().ok()?).ok()?;
    let a = s.amplitude.to_nu().ok()?;
    let map = XiMap::new(Real::parse("3.4201879093571350294775673752", prec).ok()?, Real::parse("1.7922886715457952142636031380", prec).ok()?).ok()?;
    let consts = AsymptoticConstants::new(prec).ok()?;
    let nu = Real::from_f64(mu, prec) * Real::from_f64(mu, prec);
    let tv = Resummation::period(&t, &map, &consts, &Real::zero(prec), m).ok()?.evaluate(&nu).ok()?;
    let av = Resummation::amplitude(&a, &map, &consts, AmplitudeForm::Expansion, m + 2).ok()?.evaluate(&nu).ok()?;
    Some(json!({ "period": num(&tv.value, 20), "amplitude": num(&av.value, 20), "M": m }))
}

fn js(r: Out) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lp_series(order: usize, exact: bool, digits: u32) -> Result<String, JsError> {
    js(lp_series_json(order, exact, digits))
}

#[wasm_bindgen]
pub fn branch_point(k: usize, digits: u32, tol: f64) -> Result<String, JsError> {
    js(branch_point_json(k, digits, tol))
}

#[wasm_bindgen]
pub fn cycle(mu: f64, digits: u32, samples: usize) -> Result<String, JsError> {
    js(limit_cycle_json(mu, digits, samples))
}
