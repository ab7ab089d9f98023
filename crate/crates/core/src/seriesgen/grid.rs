//! Collocation engine for the floating-point recursion.
//!
//! Every `y_m` holds odd harmonics only, so it is antiperiodic under
//! `tau -> tau + pi` and is fixed by its values on the half-period grid
//! `tau_j = pi j / G`, `j < G`. Cauchy products in `mu` become pointwise
//! products there, which costs `O(m G)` per order instead of a Fourier
//! convolution.

use crate::error::Result;
use crate::real::{Precision, Real};
use crate::seriesgen::lp::CubicEngine;
use crate::seriesgen::trig::TrigPoly;

pub struct GridEngine {
    prec: Precision,
    /// Number of half-period nodes.
    g: usize,
    /// `cos(pi i / G)` and `sin(pi i / G)` for `i < 2G`.
    cos_tab: Vec<Real>,
    sin_tab: Vec<Real>,
    /// Fourier form of each pushed `y_m`, kept for regridding.
    ys: Vec<TrigPoly<Real>>,
    y_grid: Vec<Vec<Real>>,
    /// `[y^2]_m` on the grid.
    y2_grid: Vec<Vec<Real>>,
}

impl GridEngine {
    pub fn new(prec: Precision, max_order: usize) -> Self {
        let mut e = GridEngine {
            prec,
            g: 0,
            cos_tab: Vec::new(),
            sin_tab: Vec::new(),
            ys: Vec::new(),
            y_grid: Vec::new(),
            y2_grid: Vec::new(),
        };
        e.build_tables(Self::nodes_for(max_order));
        e
    }

    /// Nodes resolving the cube at order `m` (harmonics up to `2m + 3`).
    fn nodes_for(m: usize) -> usize {
        2 * m + 6
    }

    fn build_tables(&mut self, g: usize) {
        let step = Real::pi(self.prec) / Real::from_int(g as i64, self.prec);
        self.g = g;
        self.cos_tab = (0..2 * g).map(|i| step.mul_int(i as i64).cos()).collect();
        self.sin_tab = (0..2 * g).map(|i| step.mul_int(i as i64).sin()).collect();
    }

    fn to_grid(&self, y: &TrigPoly<Real>) -> Vec<Real> {
        let two_g = 2 * self.g;
        let mut out = vec![Real::zero(self.prec); self.g];
        for (k, c) in y.cos_coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, v) in out.iter_mut().enumerate() {
                v.add_product(c, &self.cos_tab[(k * j) % two_g]);
            }
        }
        for (i, s) in y.sin_coeffs().iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let k = i + 1;
            for (j, v) in out.iter_mut().enumerate() {
                v.add_product(s, &self.sin_tab[(k * j) % two_g]);
            }
        }
        out
    }

    /// Odd-harmonic Fourier coefficients up to `h` of antiperiodic grid data.
    fn coeffs_from_grid(&self, values: &[Real], h: usize) -> TrigPoly<Real> {
        let two_g = 2 * self.g;
        let mut p = TrigPoly::zero(h, self.prec);
        let scale = Real::from_ratio(2, self.g as i64, self.prec);
        for k in (1..=h).step_by(2) {
            let mut a = Real::zero(self.prec);
            let mut b = Real::zero(self.prec);
            for (j, v) in values.iter().enumerate() {
                let idx = (k * j) % two_g;
                a.add_product(v, &self.cos_tab[idx]);
                b.add_product(v, &self.sin_tab[idx]);
            }
            p.cos_mut()[k] = a * &scale;
            p.sin_mut()[k] = b * &scale;
        }
        p
    }

    fn square_at(&self, m: usize) -> Vec<Real> {
        let mut out = vec![Real::zero(self.prec); self.g];
        for i in (0..=m).take_while(|&i| 2 * i < m) {
            for ((v, x), y) in out.iter_mut().zip(&self.y_grid[i]).zip(&self.y_grid[m - i]) {
                v.add_product(x, y);
            }
        }
        for v in out.iter_mut() {
            *v = v.mul_int(2);
        }
        if m.is_multiple_of(2) {
            for (v, x) in out.iter_mut().zip(&self.y_grid[m / 2]) {
                v.add_product(x, x);
            }
        }
        out
    }

    fn cube_at(&self, m: usize) -> Vec<Real> {
        let mut out = vec![Real::zero(self.prec); self.g];
        for i in 0..=m {
            for ((v, q), y) in out.iter_mut().zip(&self.y2_grid[i]).zip(&self.y_grid[m - i]) {
                v.add_product(q, y);
            }
        }
        out
    }

    fn regrid(&mut self, g: usize) {
        self.build_tables(g);
        let ys = std::mem::take(&mut self.ys);
        self.y_grid.clear();
        self.y2_grid.clear();
        for (m, y) in ys.iter().enumerate() {
            self.y_grid.push(self.to_grid(y));
            let sq = self.square_at(m);
            self.y2_grid.push(sq);
        }
        self.ys = ys;
    }
}

impl CubicEngine<Real> for GridEngine {
    fn push(&mut self, y: &TrigPoly<Real>) -> Result<TrigPoly<Real>> {
        let m = self.ys.len();
        if self.g < Self::nodes_for(m) {
            self.regrid(Self::nodes_for(2 * m + 2));
        }
        self.ys.push(y.clone());
        self.y_grid.push(self.to_grid(y));
        let sq = self.square_at(m);
        self.y2_grid.push(sq);
        let cube = self.cube_at(m);
        Ok(self.coeffs_from_grid(&cube, 2 * m + 3))
    }

    fn shift_last(&mut self, a: &Real) {
        let m = self.ys.len() - 1;
        let last = self.ys.last_mut().expect("shift after push");
        last.resize(1);
        last.cos_mut()[1] = last.cos_mut()[1].clone() + a;
        let two_a = a.mul_int(2);
        for j in 0..self.g {
            let c = &self.cos_tab[j];
            self.y_grid[m][j].add_product(a, c);
            if m > 0 {
                let t = &two_a * c;
                self.y2_grid[m][j].add_product(&t, &self.y_grid[0][j]);
            }
        }
        if m == 0 {
            self.y2_grid[0] = self.square_at(0);
        }
    }
}
