use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use cycle_scope::oracle::{limit_cycle, reference_csv, reference_table, LimitCycle};
use cycle_scope::resum::{
    gamma_sweep, linear_grid, AmplitudeForm, AsymptoticConstants, ResumConfig, Resummation,
};
use cycle_scope::seriesgen::{
    digit_loss_diagnostic, generate_exact, generate_float, period_series, CoeffFile, PowerSeries, Quantity,
    Variable, DEFAULT_DIGITS,
};
use cycle_scope::shafer::{branch_report_csv, estimate_branch_point, persistence_csv, root_cloud_csv};
use cycle_scope::{Error, Precision, Real, Result};

use crate::{BranchArgs, MuChoice, OracleArgs, ResumArgs, SeriesArgs, VerifyArgs};

pub const PRECISION_ENV: &str = "CYCLE_SCOPE_PRECISION";
const ORACLE_DEFAULT_DIGITS: u32 = 50;

fn env_digits() -> Result<Option<u32>> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Precondition(format!("{PRECISION_ENV}={v:?} is not a digit count"))),
        Err(_) => Ok(None),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// `start:stop:count`.
pub fn parse_grid(text: &str, prec: Precision) -> Result<Vec<Real>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(Error::Parse(format!("grid {text:?} is not start:stop:count")));
    };
    let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad grid count {n:?}")))?;
    if n == 0 {
        return Err(Error::Precondition("grid needs at least one point".into()));
    }
    Ok(linear_grid(&Real::parse(a.trim(), prec)?, &Real::parse(b.trim(), prec)?, n))
}

fn mus(choice: &MuChoice, prec: Precision) -> Result<Vec<Real>> {
    let list = match (&choice.mu, &choice.mu_grid) {
        (Some(m), _) => vec![Real::parse(m, prec)?],
        (None, Some(g)) => parse_grid(g, prec)?,
        (None, None) => return Err(Error::Precondition("--mu or --mu-grid is required".into())),
    };
    if list.iter().any(|m| m.is_negative()) {
        return Err(Error::Precondition("mu must be non-negative".into()));
    }
    Ok(list)
}

/// Series in `nu` from a coefficient file.
fn load_nu(path: &Path, prec: Option<Precision>) -> Result<(Quantity, PowerSeries<Real>)> {
    let file = CoeffFile::parse(&read(path)?)?;
    let prec = prec.or(match file.mode {
        cycle_scope::seriesgen::Mode::Exact => Some(Precision::from_digits(DEFAULT_DIGITS)),
        cycle_scope::seriesgen::Mode::Float(_) => None,
    });
    let s = file.to_real_series(prec)?;
    let s = if s.variable() == Variable::Mu { s.to_nu()? } else { s };
    Ok((file.quantity, s))
}

fn sci(x: &Real) -> String {
    x.to_sci_string(x.precision().digits() as usize)
}

fn rel_err(x: &Real, reference: &Real) -> Real {
    let r = reference.with_precision(x.precision());
    ((x - &r) / &r).abs()
}

pub fn series(a: SeriesArgs) -> Result<()> {
    fs::create_dir_all(&a.out)?;
    let digits = match a.digits {
        Some(d) => d,
        None => env_digits()?.unwrap_or(DEFAULT_DIGITS),
    };
    let prec = Precision::from_digits(digits);
    let mut written = Vec::new();
    let mut save = |name: &str, file: CoeffFile| -> Result<()> {
        let path = a.out.join(name);
        write(&path, &file.to_text())?;
        written.push(path);
        Ok(())
    };

    if a.exact {
        let e = generate_exact(a.order)?;
        let t = period_series(&e.omega.to_real(prec))?;
        save("omega.txt", CoeffFile::from_rational(Quantity::Omega, &e.omega))?;
        save("amplitude.txt", CoeffFile::from_rational(Quantity::Amplitude, &e.amplitude))?;
        save("period.txt", CoeffFile::from_real(Quantity::Period, &t))?;
        if a.digits.is_some() {
            let f = generate_float(a.order, prec)?;
            save("omega_float.txt", CoeffFile::from_real(Quantity::Omega, &f.omega))?;
            save("amplitude_float.txt", CoeffFile::from_real(Quantity::Amplitude, &f.amplitude))?;
            let d = digit_loss_diagnostic(&e.omega, &f.omega)?;
            println!("digit loss (omega, {digits} digits):");
            println!("order,digits");
            for (n, dig) in &d.points {
                println!("{n},{dig:.2}");
            }
            println!(
                "fit per order: slope {:.4}, intercept {:.2}, r {:.4}",
                d.by_order.slope, d.by_order.intercept, d.by_order.r
            );
        }
    } else {
        let f = generate_float(a.order, prec)?;
        let t = period_series(&f.omega)?;
        save("omega.txt", CoeffFile::from_real(Quantity::Omega, &f.omega))?;
        save("amplitude.txt", CoeffFile::from_real(Quantity::Amplitude, &f.amplitude))?;
        save("period.txt", CoeffFile::from_real(Quantity::Period, &t))?;
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(())
}

pub fn branch(a: BranchArgs) -> Result<()> {
    if a.kmin > a.kmax || a.kstep == 0 {
        return Err(Error::Precondition("need kmin <= kmax and kstep > 0".into()));
    }
    let digits = match a.digits {
        Some(d) => Some(d),
        None => env_digits()?,
    };
    let (quantity, s) = load_nu(&a.input, digits.map(Precision::from_digits))?;
    let orders: Vec<usize> = (a.kmin..=a.kmax).step_by(a.kstep).collect();
    let rows = estimate_branch_point(&s, &orders, a.tol)?;
    fs::create_dir_all(&a.out)?;
    write(&a.out.join("branch_report.csv"), &branch_report_csv(&rows))?;
    write(&a.out.join("root_cloud.csv"), &root_cloud_csv(&rows))?;
    write(&a.out.join("persistence.csv"), &persistence_csv(&rows))?;
    for (k, r) in &rows {
        match r {
            Ok(e) => println!("K={k}: R={} phi={}", e.modulus.to_sci_string(40), e.phase.to_sci_string(40)),
            Err(err) => println!("K={k}: {err}"),
        }
    }
    let best = rows
        .iter()
        .rev()
        .find_map(|(_, r)| r.as_ref().ok())
        .ok_or(Error::NoPersistentPair)?;
    let cfg = ResumConfig {
        modulus: Some(sci(&best.modulus)),
        phase: Some(sci(&best.phase)),
        precision_digits: Some(s.precision().digits()),
        order: Some(best.order),
        ..ResumConfig::default()
    };
    let path = a.out.join("branch.txt");
    write(&path, &format!("# nearest branch point of the {quantity} series\n{}", cfg.to_text()))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Settings from the branch file, overlaid by the config file and `--gamma`.
fn settings(branch: &Path, config: Option<&PathBuf>, gamma: Option<&String>) -> Result<ResumConfig> {
    let mut cfg = ResumConfig::parse(&read(branch)?)?;
    if let Some(c) = config {
        cfg = cfg.merged(&ResumConfig::parse(&read(c)?)?);
    }
    if let Some(g) = gamma {
        cfg.gamma = Some(g.clone());
    }
    Ok(cfg)
}

type Series = PowerSeries<Real>;

/// Period and amplitude series from a directory or from one file and its siblings.
fn load_pair(input: &Path) -> Result<(Option<Series>, Option<Series>)> {
    let dir = if input.is_dir() { input.to_path_buf() } else { input.parent().unwrap_or(Path::new(".")).to_path_buf() };
    let mut period = None;
    let mut amplitude = None;
    if input.is_file() {
        match load_nu(input, None)? {
            (Quantity::Period, s) => period = Some(s),
            (Quantity::Amplitude, s) => amplitude = Some(s),
            (Quantity::Omega, s) => period = Some(period_series(&s)?),
        }
    }
    if period.is_none() && dir.join("period.txt").is_file() {
        period = Some(load_nu(&dir.join("period.txt"), None)?.1);
    }
    if amplitude.is_none() && dir.join("amplitude.txt").is_file() {
        amplitude = Some(load_nu(&dir.join("amplitude.txt"), None)?.1);
    }
    if period.is_none() && amplitude.is_none() {
        return Err(Error::Precondition(format!("no period or amplitude series at {}", input.display())));
    }
    Ok((period, amplitude))
}

struct Resummers {
    period: Option<Resummation>,
    amplitude: Option<Resummation>,
    period_gamma0: Option<Resummation>,
}

fn resummers(
    t: Option<&PowerSeries<Real>>,
    a: Option<&PowerSeries<Real>>,
    cfg: &ResumConfig,
    m: usize,
) -> Result<(Resummers, Precision)> {
    let prec = t.or(a).map(|s| s.precision()).expect("at least one series");
    let map = cfg.xi_map(prec)?;
    let consts = cfg.constants(prec)?;
    let gamma = cfg.gamma(prec)?;
    let period = t.map(|t| Resummation::period(t, &map, &consts, &gamma, m)).transpose()?;
    let period_gamma0 = t.map(|t| Resummation::period(t, &map, &consts, &Real::zero(prec), m)).transpose()?;
    let amplitude = a.map(|a| Resummation::amplitude(a, &map, &consts, AmplitudeForm::Expansion, m + 2)).transpose()?;
    Ok((Resummers { period, amplitude, period_gamma0 }, prec))
}

fn eval(r: Option<&Resummation>, nu: &Real) -> Option<Result<Real>> {
    r.map(|r| r.evaluate(nu).map(|v| v.value))
}

fn cell(v: &Option<Result<Real>>) -> String {
    match v {
        Some(Ok(x)) => sci(x),
        _ => String::new(),
    }
}

fn problem(v: &Option<Result<Real>>) -> Option<String> {
    match v {
        Some(Err(e)) => Some(e.to_string()),
        _ => None,
    }
}

pub fn resum(a: ResumArgs) -> Result<()> {
    let (t, am) = load_pair(&a.input)?;
    let cfg = settings(&a.branch, a.config.as_ref(), a.gamma.as_ref())?;
    let (rs, prec) = resummers(t.as_ref(), am.as_ref(), &cfg, a.pade)?;
    let gamma = cfg.gamma(prec)?;
    let mut out = String::from("mu,T_resum,A_resum,gamma,M,N,rel_err_vs_oracle\n");
    let mut failed = 0;
    for mu in mus(&a.mu, prec)? {
        let nu = &mu * &mu;
        let tv = eval(rs.period.as_ref(), &nu);
        let av = eval(rs.amplitude.as_ref(), &nu);
        for p in [problem(&tv), problem(&av)].into_iter().flatten() {
            eprintln!("mu={}: {p}", mu.to_sci_string(12));
            failed += 1;
        }
        let err = if a.oracle {
            match limit_cycle(&mu, a.oracle_digits, None) {
                Ok(c) => {
                    let errs: Vec<Real> = [(&tv, &c.period), (&av, &c.amplitude)]
                        .into_iter()
                        .filter_map(|(v, r)| match v {
                            Some(Ok(x)) => Some(rel_err(x, r)),
                            _ => None,
                        })
                        .collect();
                    errs.into_iter().reduce(|x, y| if y > x { y } else { x }).map(|e| e.to_sci_string(6)).unwrap_or_default()
                }
                Err(e) => {
                    eprintln!("mu={}: oracle: {e}", mu.to_sci_string(12));
                    String::new()
                }
            }
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{err}",
            sci(&mu),
            cell(&tv),
            cell(&av),
            gamma.to_sci_string(20),
            a.pade,
            a.pade + 2
        );
    }
    match &a.out {
        Some(p) => write(p, &out)?,
        None => print!("{out}"),
    }
    if failed > 0 {
        return Err(Error::NoConvergence(format!("{failed} resummed value(s) failed")));
    }
    Ok(())
}

pub fn oracle(a: OracleArgs) -> Result<()> {
    let digits = match a.digits {
        Some(d) => d,
        None => env_digits()?.unwrap_or(ORACLE_DEFAULT_DIGITS),
    };
    let rows = reference_table(&mus(&a.mu, Precision::from_digits(digits))?, digits);
    let csv = reference_csv(&rows);
    match &a.out {
        Some(p) => write(p, &csv)?,
        None => print!("{csv}"),
    }
    let failures: Vec<&Error> = rows.iter().filter_map(|(_, r)| r.as_ref().err()).collect();
    match failures.first() {
        None => Ok(()),
        Some(first) => {
            let msg = format!("{} of {} oracle run(s) failed, first: {first}", failures.len(), rows.len());
            Err(if first.is_precondition() { Error::Precondition(msg) } else { Error::NoConvergence(msg) })
        }
    }
}

pub fn verify(a: VerifyArgs) -> Result<()> {
    let (t, am) = load_pair(&a.series)?;
    let (Some(t), Some(am)) = (t, am) else {
        return Err(Error::Precondition("verify needs both period.txt and amplitude.txt".into()));
    };
    let cfg = settings(&a.branch, a.config.as_ref(), a.gamma.as_ref())?;
    let (rs, prec) = resummers(Some(&t), Some(&am), &cfg, a.pade)?;
    let radius = cfg.xi_map(prec)?.modulus().clone();
    let grid = parse_grid(&a.mu_grid, prec)?;
    let oracle_rows = reference_table(&grid, a.oracle_digits);

    let mut out = String::from(
        "mu,T_oracle,A_oracle,T_series,err_T_series,T_resum_gamma0,err_T_gamma0,T_resum_gamma,err_T_gamma,A_resum,err_A,error\n",
    );
    let mut failures = 0;
    for (mu, oc) in &oracle_rows {
        let mu = mu.with_precision(prec);
        let nu = &mu * &mu;
        let series_value = (nu < radius).then(|| t.evaluate(&nu));
        let t0 = eval(rs.period_gamma0.as_ref(), &nu);
        let tg = eval(rs.period.as_ref(), &nu);
        let av = eval(rs.amplitude.as_ref(), &nu);
        let mut notes: Vec<String> = [problem(&t0), problem(&tg), problem(&av)].into_iter().flatten().collect();
        let err = |v: &Option<Result<Real>>, reference: Option<&Real>| match (v, reference) {
            (Some(Ok(x)), Some(r)) => rel_err(x, r).to_sci_string(6),
            _ => String::new(),
        };
        let oc: Option<&LimitCycle> = match oc {
            Ok(c) => Some(c),
            Err(e) => {
                notes.push(format!("oracle: {e}"));
                None
            }
        };
        let (tref, aref) = (oc.map(|c| &c.period), oc.map(|c| &c.amplitude));
        let (series_cell, series_err) = match &series_value {
            Some(v) => (sci(v), tref.map(|r| rel_err(v, r).to_sci_string(6)).unwrap_or_default()),
            None => ("divergent".to_string(), String::new()),
        };
        failures += usize::from(!notes.is_empty());
        let _ = writeln!(
            out,
            "{},{},{},{series_cell},{series_err},{},{},{},{},{},{},{}",
            sci(&mu),
            tref.map(sci).unwrap_or_default(),
            aref.map(sci).unwrap_or_default(),
            cell(&t0),
            err(&t0, tref),
            cell(&tg),
            err(&tg, tref),
            cell(&av),
            err(&av, aref),
            if notes.is_empty() { String::new() } else { format!("\"{}\"", notes.join("; ").replace('"', "'")) }
        );
    }
    fs::create_dir_all(&a.out)?;
    let path = a.out.join("verify.csv");
    write(&path, &out)?;
    print!("{out}");
    println!("wrote {}", path.display());

    if let Some(spec) = &a.gamma_sweep {
        let gammas = parse_grid(spec, prec)?;
        let (mu, c) = oracle_rows
            .iter()
            .rev()
            .find_map(|(mu, r)| r.as_ref().ok().map(|c| (mu, c)))
            .ok_or_else(|| Error::NoConvergence("gamma sweep needs at least one oracle value".into()))?;
        let map = cfg.xi_map(prec)?;
        let consts: AsymptoticConstants = cfg.constants(prec)?;
        let sweep = gamma_sweep(&mu.with_precision(prec), &gammas, &t, &map, &consts, a.pade, &c.period.with_precision(prec));
        let path = a.out.join("gamma_sweep.csv");
        write(&path, &sweep.to_csv())?;
        match sweep.best() {
            Some(i) => println!(
                "gamma sweep at mu={}: minimum {} at gamma={}{}",
                mu.to_sci_string(12),
                sweep.rows[i].1.as_ref().map(|e| e.to_sci_string(6)).unwrap_or_default(),
                sweep.rows[i].0.to_sci_string(6),
                if sweep.has_interior_minimum() { "" } else { " (at the grid edge)" }
            ),
            None => println!("gamma sweep at mu={}: every point failed", mu.to_sci_string(12)),
        }
        println!("wrote {}", path.display());
    }
    if failures > 0 {
        return Err(Error::NoConvergence(format!("{failures} verify row(s) flagged")));
    }
    Ok(())
}
