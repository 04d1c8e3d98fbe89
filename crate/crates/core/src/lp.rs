//! Dense two-phase simplex for `max cᵀx  s.t.  Ax ≤ b` with free `x`.
//!
//! Free variables are split as `x = x⁺ − x⁻`, every row gets a slack, and rows
//! with a negative right-hand side get an artificial variable for phase one.
//! Pivoting follows Bland's rule (lowest eligible index enters, ties in the
//! ratio test go to the lowest basic index), which rules out cycling.

use crate::linalg::{dot, Matrix};

/// Pivot elements smaller than this are treated as zero.
const PIVOT_EPS: f64 = 1e-11;
/// Residual tolerance for feasibility checks.
pub const FEASIBILITY_TOL: f64 = 1e-9;

const MAX_PIVOTS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, vertex: Vec<f64> },
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn vertex(&self) -> Option<&[f64]> {
        match self {
            LpOutcome::Optimal { vertex, .. } => Some(vertex),
            _ => None,
        }
    }
}

struct Tableau {
    m: usize,
    ncols: usize,
    /// m rows of `ncols + 1` entries, the last one being the right-hand side.
    t: Vec<f64>,
    /// Reduced costs, with `-z` in the last slot.
    d: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn width(&self) -> usize {
        self.ncols + 1
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.width() + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.ncols)
    }

    fn reset_costs(&mut self, c: &[f64]) {
        let w = self.width();
        self.d.clear();
        self.d.extend_from_slice(c);
        self.d.push(0.0);
        for i in 0..self.m {
            let cb = c[self.basis[i]];
            if cb != 0.0 {
                let row = &self.t[i * w..(i + 1) * w];
                for (dj, &tij) in self.d.iter_mut().zip(row) {
                    *dj -= cb * tij;
                }
            }
        }
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width();
        let p = self.at(r, e);
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        for row in before.chunks_exact_mut(w).chain(after.chunks_exact_mut(w)) {
            let f = row[e];
            if f != 0.0 {
                for (x, &pr) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * pr;
                }
                row[e] = 0.0;
            }
        }
        let f = self.d[e];
        if f != 0.0 {
            for (x, &pr) in self.d.iter_mut().zip(prow.iter()) {
                *x -= f * pr;
            }
            self.d[e] = 0.0;
        }
        self.basis[r] = e;
    }

    /// Runs Bland-rule pivots over columns `< allowed`. Returns false when unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        for _ in 0..MAX_PIVOTS {
            let Some(e) = (0..allowed).find(|&j| self.d[j] > PIVOT_EPS) else {
                return true;
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.m {
                let a = self.at(i, e);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= 1e-12 * lr.abs().max(1.0);
                            if ratio < lr && !tie || tie && self.basis[i] < self.basis[li] {
                                Some((i, ratio))
                            } else {
                                Some((li, lr))
                            }
                        }
                    };
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
        panic!("simplex exceeded {MAX_PIVOTS} pivots; Bland's rule should have terminated");
    }
}

/// Maximizes `c·x` over `{x : a x ≤ b}`.
pub fn maximize(a: &Matrix, b: &[f64], c: &[f64]) -> LpOutcome {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m);
    assert_eq!(c.len(), n);

    // Rows are normalized so pivot tolerances are scale-free.
    let scale: Vec<f64> = a
        .row_iter()
        .map(|r| {
            let s = dot(r, r).sqrt();
            if s > 0.0 {
                1.0 / s
            } else {
                1.0
            }
        })
        .collect();
    let neg: Vec<bool> = b.iter().zip(&scale).map(|(&bi, &s)| bi * s < 0.0).collect();
    let n_art = neg.iter().filter(|&&x| x).count();
    let art0 = 2 * n + m;
    let ncols = art0 + n_art;
    let w = ncols + 1;

    let mut t = vec![0.0; m * w];
    let mut basis = vec![0; m];
    let mut next_art = art0;
    for i in 0..m {
        let sign = if neg[i] { -1.0 } else { 1.0 };
        let s = scale[i] * sign;
        let row = &mut t[i * w..(i + 1) * w];
        for j in 0..n {
            let v = a[(i, j)] * s;
            row[j] = v;
            row[n + j] = -v;
        }
        row[2 * n + i] = sign;
        row[ncols] = b[i] * s;
        if neg[i] {
            row[next_art] = 1.0;
            basis[i] = next_art;
            next_art += 1;
        } else {
            basis[i] = 2 * n + i;
        }
    }
    let mut tab = Tableau {
        m,
        ncols,
        t,
        d: Vec::with_capacity(w),
        basis,
    };

    if n_art > 0 {
        let mut c1 = vec![0.0; ncols];
        c1[art0..].iter_mut().for_each(|v| *v = -1.0);
        tab.reset_costs(&c1);
        tab.optimize(ncols);
        let infeasibility = tab.d[ncols];
        let bscale = (0..m).map(|i| tab.rhs(i).abs()).fold(1.0_f64, f64::max);
        if infeasibility > FEASIBILITY_TOL * bscale {
            return LpOutcome::Infeasible;
        }
        for i in 0..m {
            if tab.basis[i] >= art0 {
                if let Some(j) = (0..art0).find(|&j| tab.at(i, j).abs() > 1e-9) {
                    tab.pivot(i, j);
                }
            }
        }
    }

    let mut c2 = vec![0.0; ncols];
    c2[..n].copy_from_slice(c);
    for j in 0..n {
        c2[n + j] = -c[j];
    }
    tab.reset_costs(&c2);
    if !tab.optimize(art0) {
        return LpOutcome::Unbounded;
    }

    let mut y = vec![0.0; ncols];
    for i in 0..m {
        y[tab.basis[i]] = tab.rhs(i);
    }
    let vertex: Vec<f64> = (0..n).map(|j| y[j] - y[n + j]).collect();
    let value = dot(c, &vertex);
    LpOutcome::Optimal { value, vertex }
}
