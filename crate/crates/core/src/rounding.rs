//! Affine rounding with the shallow-β-cut ellipsoid method.
//!
//! Starting from a ball around the polytope, ellipsoids `E(T, o) ⊇ P` are
//! shrunk by shallow cuts until the concentric copy `E(β²T, o)` fits inside
//! `P`. Writing `T = LᵀL`, the substitution `x = β Lᵀ y + o` then produces a
//! polytope with `B(0, 1) ⊆ P'' ⊆ B(0, 1/β)` and `vol(P) = det(L) βⁿ vol(P'')`.

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq, Matrix};
use crate::polytope::Polytope;

/// `E(T, o) = {x : (x − o)ᵀ T⁻¹ (x − o) ≤ 1}`.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    pub shape: Matrix,
    pub center: Vec<f64>,
}

impl Ellipsoid {
    pub fn ball(center: Vec<f64>, radius: f64) -> Self {
        let mut shape = Matrix::identity(center.len());
        for i in 0..center.len() {
            shape[(i, i)] = radius * radius;
        }
        Ellipsoid { shape, center }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// `(x − o)ᵀ T⁻¹ (x − o)`; at most 1 exactly on the ellipsoid.
    pub fn mahalanobis_sq(&self, x: &[f64]) -> Result<f64> {
        let l = cholesky(&self.shape)?;
        let diff: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        // T = LᵀL, so solve Lᵀ z = diff and return ‖z‖².
        let z = solve_lower_transposed(&l, &diff);
        Ok(dot(&z, &z))
    }
}

/// Upper-triangular `L` with `T = LᵀL`.
pub fn cholesky(t: &Matrix) -> Result<Matrix> {
    let n = t.rows();
    assert_eq!(n, t.cols(), "cholesky needs a square matrix");
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut diag = t[(j, j)];
        for k in 0..j {
            diag -= l[(k, j)] * l[(k, j)];
        }
        if !(diag > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: diag });
        }
        let ljj = diag.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = t[(j, i)];
            for k in 0..j {
                s -= l[(k, j)] * l[(k, i)];
            }
            l[(j, i)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `Lᵀ z = v` for upper-triangular `L` (so `Lᵀ` is lower-triangular).
fn solve_lower_transposed(l: &Matrix, v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut s = v[i];
        for k in 0..i {
            s -= l[(k, i)] * z[k];
        }
        z[i] = s / l[(i, i)];
    }
    z
}

/// The ball `B(o₀, r₀)` built from the `2n` coordinate LPs: `o₀` is the mean
/// of the maximizing vertices and `r₀` the diagonal of the bounding box.
///
/// Optimal vertices are not unique on degenerate faces. When the box center
/// is feasible the LPs are re-solved with the polytope translated to it, so
/// the choice (and hence `o₀`) does not depend on where the polytope sits.
pub fn init_ellipsoid(p: &Polytope) -> Result<Ellipsoid> {
    let mut bounds = p.axis_bounds()?;
    let n = p.dim();
    let mid: Vec<f64> = bounds
        .upper
        .iter()
        .zip(&bounds.lower)
        .map(|(u, l)| 0.5 * (u + l))
        .collect();
    if p.contains_unchecked(&mid) {
        let shifted_b = p
            .a()
            .row_iter()
            .zip(p.b())
            .map(|(row, &bi)| bi - dot(row, &mid))
            .collect();
        let shifted = Polytope::from_parts(p.a().clone(), shifted_b)?;
        let local = shifted.axis_bounds()?;
        bounds.vertices = local
            .vertices
            .into_iter()
            .map(|v| v.iter().zip(&mid).map(|(x, m)| x + m).collect())
            .collect();
    }
    let mut center = vec![0.0; n];
    for v in &bounds.vertices {
        for (c, x) in center.iter_mut().zip(v) {
            *c += x;
        }
    }
    let k = bounds.vertices.len() as f64;
    center.iter_mut().for_each(|c| *c /= k);
    let radius = bounds
        .upper
        .iter()
        .zip(&bounds.lower)
        .map(|(u, l)| (u - l) * (u - l))
        .sum::<f64>()
        .sqrt();
    Ok(Ellipsoid::ball(center, radius))
}

/// Output of [`round_polytope`].
#[derive(Clone, Debug)]
pub struct RoundedPolytope {
    /// The transformed polytope `P''`.
    pub polytope: Polytope,
    /// `vol(input) / vol(P'') = det(L) βⁿ`.
    pub gamma: f64,
    /// Upper-triangular Cholesky factor of the final shape matrix.
    pub factor: Matrix,
    /// Final ellipsoid center, in input coordinates.
    pub center: Vec<f64>,
    pub beta: f64,
    pub iterations: usize,
    pub det_factor: f64,
}

impl RoundedPolytope {
    /// Maps a point of `P''` back to input coordinates: `x = β Lᵀ y + o`.
    pub fn to_original(&self, y: &[f64]) -> Vec<f64> {
        let n = y.len();
        (0..n)
            .map(|i| {
                let s: f64 = (0..=i).map(|k| self.factor[(k, i)] * y[k]).sum();
                self.beta * s + self.center[i]
            })
            .collect()
    }

    /// `min_i b''_i / ‖a''_i‖`; at least 1 when the unit ball is inscribed.
    pub fn inscribed_radius(&self) -> f64 {
        self.polytope.inradius_at_origin()
    }
}

/// Stepwise shallow-cut iteration, exposed so callers can observe every ellipsoid.
pub struct ShallowCut<'a> {
    polytope: &'a Polytope,
    beta: f64,
    ellipsoid: Ellipsoid,
    iterations: usize,
    cap: usize,
    /// Scratch for `T a_iᵀ`.
    ta: Vec<f64>,
}

impl<'a> ShallowCut<'a> {
    pub fn new(polytope: &'a Polytope, beta: f64) -> Result<Self> {
        let n = polytope.dim();
        if !(beta > 0.0 && beta * (n as f64) < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "shallow-cut beta must lie in (0, 1/{n}), got {beta}"
            )));
        }
        let mut ellipsoid = init_ellipsoid(polytope)?;
        if n == 1 {
            // The shallow-cut update divides by n² − 1. In one dimension the
            // interval itself is an exact sandwich, so start (and stop) there.
            let bounds = polytope.axis_bounds()?;
            let half = 0.5 * (bounds.upper[0] - bounds.lower[0]);
            ellipsoid = Ellipsoid::ball(vec![0.5 * (bounds.upper[0] + bounds.lower[0])], half);
        }
        Ok(ShallowCut {
            polytope,
            beta,
            ellipsoid,
            iterations: 0,
            cap: 10_000 * n,
            ta: vec![0.0; n],
        })
    }

    pub fn ellipsoid(&self) -> &Ellipsoid {
        &self.ellipsoid
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Picks the first constraint that is violated by the center or that
    /// fails the shallow containment test `β √(aᵢ T aᵢᵀ) ≤ bᵢ − aᵢ·o`.
    fn select_cut(&mut self) -> Result<Option<(usize, f64)>> {
        let p = self.polytope;
        let o = &self.ellipsoid.center;
        let center_cut = p
            .a()
            .row_iter()
            .zip(p.b())
            .position(|(row, &bi)| dot(row, o) > bi);
        let candidates: Box<dyn Iterator<Item = usize>> = match center_cut {
            Some(i) => Box::new(std::iter::once(i)),
            None => Box::new(0..p.num_constraints()),
        };
        for i in candidates {
            let row = p.a().row(i);
            let t = &self.ellipsoid.shape;
            for (r, ta) in self.ta.iter_mut().enumerate() {
                *ta = dot(t.row(r), row);
            }
            let q = dot(row, &self.ta);
            if !(q > 0.0) {
                return Err(Error::RoundingCholesky {
                    iteration: self.iterations,
                });
            }
            if center_cut.is_some() {
                return Ok(Some((i, q)));
            }
            let slack = p.b()[i] - dot(row, o);
            if self.beta * self.beta * q > slack * slack {
                return Ok(Some((i, q)));
            }
        }
        Ok(None)
    }

    /// Performs one cut. Returns the cut constraint, or `None` once `E(β²T, o) ⊆ P`.
    pub fn step(&mut self) -> Result<Option<usize>> {
        if self.polytope.dim() == 1 {
            return Ok(None);
        }
        // select_cut leaves T aᵢᵀ of the chosen row in `self.ta`.
        let Some((i, q)) = self.select_cut()? else {
            return Ok(None);
        };
        self.cut(q)?;
        Ok(Some(i))
    }

    /// Cuts along the row whose `T aᵢᵀ` sits in `self.ta`, with `q = aᵢ T aᵢᵀ`.
    fn cut(&mut self, q: f64) -> Result<()> {
        if self.iterations >= self.cap {
            return Err(Error::RoundingStalled {
                iterations: self.iterations,
            });
        }
        let n = self.polytope.dim() as f64;
        let beta = self.beta;
        let scale = q.sqrt();
        let c: Vec<f64> = self.ta.iter().map(|v| v / scale).collect();
        let shift = (1.0 - n * beta) / (n + 1.0);
        for (o, ci) in self.ellipsoid.center.iter_mut().zip(&c) {
            *o -= shift * ci;
        }
        let factor = (1.0 + (1.0 - n * beta).powi(2) / (2.0 * n * n)) * n * n * (1.0 - beta * beta)
            / (n * n - 1.0);
        let rank_one = 2.0 * (1.0 - n * beta) / ((n + 1.0) * (1.0 - beta));
        let t = &mut self.ellipsoid.shape;
        let dim = c.len();
        for r in 0..dim {
            for s in 0..dim {
                t[(r, s)] = factor * (t[(r, s)] - rank_one * c[r] * c[s]);
            }
        }
        t.symmetrize();
        self.iterations += 1;
        Ok(())
    }

    /// Cuts along row `i` regardless of the containment test.
    fn force_cut(&mut self, i: usize) -> Result<()> {
        let row = self.polytope.a().row(i);
        for (r, ta) in self.ta.iter_mut().enumerate() {
            *ta = dot(self.ellipsoid.shape.row(r), row);
        }
        let q = dot(row, &self.ta);
        if !(q > 0.0) {
            return Err(Error::RoundingCholesky {
                iteration: self.iterations,
            });
        }
        self.cut(q)
    }

    fn transform(&self) -> Result<RoundedPolytope> {
        let l = cholesky(&self.ellipsoid.shape).map_err(|_| Error::RoundingCholesky {
            iteration: self.iterations,
        })?;
        let p = self.polytope;
        let beta = self.beta;
        let o = &self.ellipsoid.center;
        let b: Vec<f64> = p
            .a()
            .row_iter()
            .zip(p.b())
            .map(|(row, &bi)| (bi - dot(row, o)) / beta)
            .collect();
        let a = p.a().matmul(&l.transpose());
        let n = p.dim();
        let det_factor: f64 = (0..n).map(|i| l[(i, i)]).product();
        let gamma = det_factor * beta.powi(n as i32);
        Ok(RoundedPolytope {
            polytope: Polytope::from_parts(a, b)?,
            gamma,
            factor: l,
            center: self.ellipsoid.center.clone(),
            beta,
            iterations: self.iterations,
            det_factor,
        })
    }

    /// Runs to completion and applies the sandwiching transformation.
    ///
    /// A constraint that passes the containment test only by a tie can land a
    /// rounding error short of the unit ball after the transform. Such a row
    /// receives one more cut, so the output always satisfies
    /// `min b''ᵢ / ‖a''ᵢ‖ ≥ 1` in floating point.
    pub fn finish(mut self) -> Result<RoundedPolytope> {
        loop {
            while self.step()?.is_some() {}
            let rounded = self.transform()?;
            let q = &rounded.polytope;
            let short = q
                .a()
                .row_iter()
                .zip(q.b())
                .position(|(row, &bi)| bi < norm_sq(row).sqrt());
            match short {
                Some(i) if q.dim() > 1 => self.force_cut(i)?,
                _ => return Ok(rounded),
            }
        }
    }
}

/// Rounds `p` so that `B(0, 1) ⊆ P'' ⊆ B(0, 1/β)`.
pub fn round_polytope(p: &Polytope, beta: f64) -> Result<RoundedPolytope> {
    ShallowCut::new(p, beta)?.finish()
}
