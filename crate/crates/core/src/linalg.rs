//! Dense linear solves in working precision.

use crate::error::{Error, Result};
use crate::real::Real;

/// Solves `a x = b` by Gaussian elimination with full pivoting.
///
/// The system is declared singular when a pivot falls below
/// `10^-(P - 10)` times the largest initial matrix entry.
pub fn solve_full_pivot(mut a: Vec<Vec<Real>>, mut b: Vec<Real>) -> Result<Vec<Real>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|row| row.len() != n) {
        return Err(Error::Precondition("linear system must be square".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let prec = b[0].precision().max(a[0][0].precision());
    let scale = a.iter().flatten().map(Real::log10_abs).fold(f64::NEG_INFINITY, f64::max);
    if scale == f64::NEG_INFINITY {
        return Err(Error::Singular("zero matrix".into()));
    }
    let threshold = scale - (prec.digits() as f64 - 10.0);
    // col_of[j] = original unknown held in column j
    let mut col_of: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut pr, mut pc, mut best) = (k, k, f64::NEG_INFINITY);
        for (i, row) in a.iter().enumerate().skip(k) {
            for (j, v) in row.iter().enumerate().skip(k) {
                let m = v.log10_abs();
                if m > best {
                    (pr, pc, best) = (i, j, m);
                }
            }
        }
        if best < threshold {
            return Err(Error::Singular(format!("pivot {k} of {n} is below the rank threshold")));
        }
        a.swap(k, pr);
        b.swap(k, pr);
        if pc != k {
            for row in a.iter_mut() {
                row.swap(k, pc);
            }
            col_of.swap(k, pc);
        }
        let pivot = a[k][k].clone();
        let (top, rest) = a.split_at_mut(k + 1);
        let prow = &top[k];
        for (i, row) in rest.iter_mut().enumerate() {
            if row[k].is_zero() {
                continue;
            }
            let f = -(&row[k] / &pivot);
            for j in k + 1..n {
                row[j].add_product(&f, &prow[j]);
            }
            row[k] = Real::zero(prec);
            let bk = b[k].clone();
            b[k + 1 + i].add_product(&f, &bk);
        }
    }
    let mut x = vec![Real::zero(prec); n];
    for k in (0..n).rev() {
        let mut acc = b[k].clone();
        for j in k + 1..n {
            acc = acc - &a[k][j] * &x[j];
        }
        x[k] = acc / &a[k][k];
    }
    let mut out = vec![Real::zero(prec); n];
    for (j, v) in x.into_iter().enumerate() {
        out[col_of[j]] = v;
    }
    Ok(out)
}
