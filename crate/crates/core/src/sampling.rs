//! Hit-and-run walks over `K = B(0, R) ∩ P`.
//!
//! Two direction rules are supported: signed coordinate axes and uniform
//! directions on the sphere. The walker keeps the residual vector `b − A x`
//! and `‖x‖²` up to date, so a coordinate step costs one column scan.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::polytope::Polytope;
use crate::rng::Stream;

/// Rows with `|a_i·u|` below this impose no bound along `u`.
const DIRECTION_EPS: f64 = 1e-14;
/// Chords shorter than this leave the point in place.
const DEGENERATE_CHORD: f64 = 1e-14;
/// Residuals and the squared norm are recomputed from scratch this often.
const REFRESH_INTERVAL: u32 = 1024;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkKind {
    #[default]
    Coordinate,
    Hypersphere,
}

impl std::fmt::Display for WalkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WalkKind::Coordinate => "coordinate",
            WalkKind::Hypersphere => "hypersphere",
        })
    }
}

impl std::str::FromStr for WalkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coordinate" => Ok(WalkKind::Coordinate),
            "hypersphere" => Ok(WalkKind::Hypersphere),
            other => Err(Error::InvalidParameter(format!("unknown walk `{other}`"))),
        }
    }
}

/// Parameter range `[t_min, t_max]` of the segment `x + t·u` inside the body.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Chord {
    pub t_min: f64,
    pub t_max: f64,
}

impl Chord {
    pub fn len(&self) -> f64 {
        self.t_max - self.t_min
    }

    fn checked(self) -> Result<Self> {
        if self.t_max < self.t_min || !self.t_min.is_finite() || !self.t_max.is_finite() {
            Err(Error::EmptyChord {
                t_min: self.t_min,
                t_max: self.t_max,
            })
        } else {
            Ok(self)
        }
    }
}

/// Ball part of the chord: roots of `‖x + t u‖² = R²` for unit `u`.
fn ball_chord(x_dot_u: f64, x_norm_sq: f64, radius_sq: f64) -> Chord {
    let disc = (x_dot_u * x_dot_u - (x_norm_sq - radius_sq)).max(0.0);
    let s = disc.sqrt();
    Chord {
        t_min: -x_dot_u - s,
        t_max: -x_dot_u + s,
    }
}

#[inline]
fn clip(chord: &mut Chord, slope: f64, residual: f64, eps: f64) {
    if slope > eps {
        chord.t_max = chord.t_max.min(residual / slope);
    } else if slope < -eps {
        chord.t_min = chord.t_min.max(residual / slope);
    }
}

/// Chord through `x` along the `d`-th axis, computed from scratch.
pub fn chord_coordinate(p: &Polytope, radius: f64, x: &[f64], d: usize) -> Result<Chord> {
    check_dims(p, x)?;
    if d >= p.dim() {
        return Err(Error::InvalidParameter(format!("axis {d} out of range")));
    }
    let mut chord = ball_chord(x[d], norm_sq(x), radius * radius);
    for (row, &bi) in p.a().row_iter().zip(p.b()) {
        clip(&mut chord, row[d], bi - dot(row, x), 0.0);
    }
    chord.checked()
}

/// Chord through `x` along the unit vector `u`, computed from scratch.
pub fn chord_direction(p: &Polytope, radius: f64, x: &[f64], u: &[f64]) -> Result<Chord> {
    check_dims(p, x)?;
    check_dims(p, u)?;
    let mut chord = ball_chord(dot(x, u), norm_sq(x), radius * radius);
    for (row, &bi) in p.a().row_iter().zip(p.b()) {
        clip(&mut chord, dot(row, u), bi - dot(row, x), DIRECTION_EPS);
    }
    chord.checked()
}

fn check_dims(p: &Polytope, x: &[f64]) -> Result<()> {
    if x.len() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: x.len(),
        });
    }
    Ok(())
}

/// A single hit-and-run chain in `B(0, R) ∩ P`.
pub struct Walker<'a> {
    polytope: &'a Polytope,
    /// Column-major copy of `A`.
    columns: Vec<f64>,
    x: Vec<f64>,
    residual: Vec<f64>,
    norm_sq: f64,
    radius_sq: f64,
    rng: Stream,
    direction: Vec<f64>,
    a_dot_u: Vec<f64>,
    since_refresh: u32,
}

impl<'a> Walker<'a> {
    /// Starts a chain at `start`, which must lie in `B(0, radius) ∩ P`.
    pub fn new(polytope: &'a Polytope, radius: f64, start: Vec<f64>, rng: Stream) -> Result<Self> {
        check_dims(polytope, &start)?;
        let (m, n) = (polytope.num_constraints(), polytope.dim());
        let mut columns = vec![0.0; m * n];
        for (i, row) in polytope.a().row_iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                columns[j * m + i] = v;
            }
        }
        let mut w = Walker {
            polytope,
            columns,
            x: Vec::new(),
            residual: vec![0.0; m],
            norm_sq: 0.0,
            radius_sq: radius * radius,
            rng,
            direction: vec![0.0; n],
            a_dot_u: vec![0.0; m],
            since_refresh: 0,
        };
        w.set_point(start)?;
        Ok(w)
    }

    pub fn point(&self) -> &[f64] {
        &self.x
    }

    pub fn norm_sq(&self) -> f64 {
        self.norm_sq
    }

    pub fn radius(&self) -> f64 {
        self.radius_sq.sqrt()
    }

    pub fn set_radius(&mut self, radius: f64) {
        self.radius_sq = radius * radius;
    }

    /// Moves the chain to `x`, which must lie in the current body.
    pub fn set_point(&mut self, x: Vec<f64>) -> Result<()> {
        check_dims(self.polytope, &x)?;
        self.x = x;
        self.refresh();
        if !self.in_body() {
            return Err(Error::InvalidParameter(
                "walk start lies outside B(0, R) ∩ P".into(),
            ));
        }
        Ok(())
    }

    /// Exact membership of the current point in `B(0, R) ∩ P`.
    pub fn in_body(&self) -> bool {
        norm_sq(&self.x) <= self.radius_sq && self.polytope.contains_unchecked(&self.x)
    }

    fn refresh(&mut self) {
        for ((r, row), &bi) in self
            .residual
            .iter_mut()
            .zip(self.polytope.a().row_iter())
            .zip(self.polytope.b())
        {
            *r = bi - dot(row, &self.x);
        }
        self.norm_sq = norm_sq(&self.x);
        self.since_refresh = 0;
    }

    #[inline]
    fn tick(&mut self) {
        self.since_refresh += 1;
        if self.since_refresh >= REFRESH_INTERVAL {
            self.refresh();
        }
    }

    pub fn step(&mut self, kind: WalkKind) -> Result<()> {
        match kind {
            WalkKind::Coordinate => self.step_coordinate(),
            WalkKind::Hypersphere => self.step_hypersphere(),
        }
    }

    /// One coordinate-direction step: a uniform axis, then a uniform point on its chord.
    pub fn step_coordinate(&mut self) -> Result<()> {
        let n = self.x.len();
        let m = self.residual.len();
        let d = self.rng.random_range(0..n);
        let xd = self.x[d];
        let rest = (self.radius_sq - (self.norm_sq - xd * xd)).max(0.0);
        let s = rest.sqrt();
        let mut chord = Chord {
            t_min: -s - xd,
            t_max: s - xd,
        };
        let col = &self.columns[d * m..(d + 1) * m];
        for (&a, &r) in col.iter().zip(&self.residual) {
            clip(&mut chord, a, r, 0.0);
        }
        let chord = chord.checked()?;
        if chord.len() <= DEGENERATE_CHORD {
            self.tick();
            return Ok(());
        }
        let t = chord.t_min + self.rng.random::<f64>() * chord.len();
        let new = xd + t;
        self.x[d] = new;
        for (r, &a) in self.residual.iter_mut().zip(col) {
            *r -= a * t;
        }
        self.norm_sq += new * new - xd * xd;
        self.tick();
        Ok(())
    }

    /// One hypersphere-direction step.
    pub fn step_hypersphere(&mut self) -> Result<()> {
        loop {
            for u in self.direction.iter_mut() {
                *u = self.rng.sample(StandardNormal);
            }
            let len = norm_sq(&self.direction).sqrt();
            if len > 1e-300 {
                self.direction.iter_mut().for_each(|u| *u /= len);
                break;
            }
        }
        for (au, row) in self.a_dot_u.iter_mut().zip(self.polytope.a().row_iter()) {
            *au = dot(row, &self.direction);
        }
        let mut chord = ball_chord(dot(&self.x, &self.direction), self.norm_sq, self.radius_sq);
        for (&au, &r) in self.a_dot_u.iter().zip(&self.residual) {
            clip(&mut chord, au, r, DIRECTION_EPS);
        }
        let chord = chord.checked()?;
        if chord.len() <= DEGENERATE_CHORD {
            self.tick();
            return Ok(());
        }
        let t = chord.t_min + self.rng.random::<f64>() * chord.len();
        for (x, &u) in self.x.iter_mut().zip(&self.direction) {
            *x += t * u;
        }
        for (r, &au) in self.residual.iter_mut().zip(&self.a_dot_u) {
            *r -= au * t;
        }
        self.norm_sq = norm_sq(&self.x);
        self.tick();
        Ok(())
    }
}
