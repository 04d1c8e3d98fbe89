//! H-representation polytopes `{x : Ax ≤ b}`.

use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::lp::{self, LpOutcome};

/// A bounded, non-empty polytope given by `m` half-spaces in `n` dimensions.
///
/// Row `i` of `A` is the outward normal of constraint `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polytope {
    a: Matrix,
    b: Vec<f64>,
}

/// Per-axis extent of a polytope, together with the LP vertices that realize it.
#[derive(Clone, Debug)]
pub struct AxisBounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// The `2n` maximizers of `x_1, -x_1, …, x_n, -x_n`, in that order.
    pub vertices: Vec<Vec<f64>>,
}

impl AxisBounds {
    pub fn box_volume(&self) -> f64 {
        self.upper.iter().zip(&self.lower).map(|(u, l)| u - l).product()
    }
}

impl Polytope {
    /// Validates and builds a polytope: shape checks, no zero normals, and
    /// `2n` coordinate LPs to establish that the region is non-empty and bounded.
    pub fn new(a: Matrix, b: Vec<f64>) -> Result<Self> {
        let p = Self::from_parts(a, b)?;
        p.axis_bounds()?;
        Ok(p)
    }

    /// Shape checks only. Used for transformed copies of already validated polytopes.
    pub(crate) fn from_parts(a: Matrix, b: Vec<f64>) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if b.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: b.len(),
            });
        }
        if n == 0 || m < n + 1 {
            return Err(Error::TooFewConstraints { m, n });
        }
        if let Some(row) = a.row_iter().position(|r| r.iter().all(|&v| v == 0.0)) {
            return Err(Error::ZeroNormal { row });
        }
        if a.as_slice().iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Polytope { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn num_constraints(&self) -> usize {
        self.a.rows()
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `a_i·x ≤ b_i` for every `i`, compared exactly.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        Ok(self.contains_unchecked(x))
    }

    #[inline]
    pub(crate) fn contains_unchecked(&self, x: &[f64]) -> bool {
        self.a.row_iter().zip(&self.b).all(|(r, &bi)| dot(r, x) <= bi)
    }

    pub fn lp_maximize(&self, c: &[f64]) -> Result<LpOutcome> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: c.len(),
            });
        }
        Ok(lp::maximize(&self.a, &self.b, c))
    }

    /// Solves the `2n` coordinate LPs.
    pub fn axis_bounds(&self) -> Result<AxisBounds> {
        let n = self.dim();
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut vertices = Vec::with_capacity(2 * n);
        let mut c = vec![0.0; n];
        for axis in 0..n {
            for sign in [1.0, -1.0] {
                c[axis] = sign;
                match lp::maximize(&self.a, &self.b, &c) {
                    LpOutcome::Optimal { value, vertex } => {
                        if sign > 0.0 {
                            upper[axis] = value;
                        } else {
                            lower[axis] = -value;
                        }
                        vertices.push(vertex);
                    }
                    LpOutcome::Unbounded => return Err(Error::Unbounded { axis }),
                    LpOutcome::Infeasible => return Err(Error::Infeasible),
                }
            }
            c[axis] = 0.0;
        }
        Ok(AxisBounds {
            lower,
            upper,
            vertices,
        })
    }

    /// Intersection with one extra half-space `c·x ≤ d`, validated.
    pub fn with_constraint(&self, c: &[f64], d: f64) -> Result<Polytope> {
        let n = self.dim();
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.len(),
            });
        }
        let mut data = self.a.as_slice().to_vec();
        data.extend_from_slice(c);
        let mut b = self.b.clone();
        b.push(d);
        Polytope::new(Matrix::from_row_major(self.num_constraints() + 1, n, data), b)
    }

    /// Distance from the origin to the nearest constraint hyperplane, `min_i b_i / ‖a_i‖`.
    pub fn inradius_at_origin(&self) -> f64 {
        self.a
            .row_iter()
            .zip(&self.b)
            .map(|(r, &bi)| bi / dot(r, r).sqrt())
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn cube2() -> Polytope {
        let a = Matrix::from_rows(&[
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ]);
        Polytope::new(a, vec![1.0; 4]).unwrap()
    }

    #[test]
    fn membership_is_exact() {
        let p = cube2();
        assert!(p.contains(&[0.0, 0.0]).unwrap());
        assert!(p.contains(&[1.0, 0.0]).unwrap());
        assert!(!p.contains(&[1.0 + 2f64.powi(-20), 0.0]).unwrap());
        assert!(matches!(p.contains(&[0.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_unbounded_and_empty() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, -1.0]]);
        assert!(Polytope::new(a.clone(), vec![1.0, 1.0, 1.0]).is_ok());
        let a2 = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert!(matches!(
            Polytope::new(a2, vec![1.0, 1.0, 1.0]),
            Err(Error::Unbounded { .. })
        ));
        assert!(matches!(
            Polytope::new(a, vec![-1.0, -1.0, -3.0]),
            Err(Error::Infeasible)
        ));
    }

    #[test]
    fn rejects_zero_rows_and_short_systems() {
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0], vec![-1.0, -1.0]]);
        assert!(matches!(
            Polytope::new(a, vec![1.0; 3]),
            Err(Error::ZeroNormal { row: 1 })
        ));
        let a = Matrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(matches!(
            Polytope::new(a, vec![1.0; 2]),
            Err(Error::TooFewConstraints { .. })
        ));
    }

    #[test]
    fn coordinate_lps_are_optimal_for_validated_polytopes() {
        let p = cube2();
        let bounds = p.axis_bounds().unwrap();
        assert_eq!(bounds.upper, vec![1.0, 1.0]);
        assert_eq!(bounds.lower, vec![-1.0, -1.0]);
        assert_eq!(bounds.vertices.len(), 4);
    }

    proptest! {
        #[test]
        fn membership_monotone_under_relaxation(
            x in prop::collection::vec(-1.5f64..1.5, 2),
            slack in prop::collection::vec(0.0f64..2.0, 4),
        ) {
            let p = cube2();
            let relaxed_b: Vec<f64> = p.b().iter().zip(&slack).map(|(b, s)| b + s).collect();
            let q = Polytope::new(p.a().clone(), relaxed_b).unwrap();
            if p.contains(&x).unwrap() {
                prop_assert!(q.contains(&x).unwrap());
            }
        }
    }
}
