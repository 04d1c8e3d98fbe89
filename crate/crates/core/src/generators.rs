//! Benchmark instance families.
//!
//! | family        | constraints                         | volume         |
//! |---------------|-------------------------------------|----------------|
//! | `cube:n`      | `±x_i ≤ 1`                          | `2ⁿ`           |
//! | `cross:n`     | `s·x ≤ 1` for all sign vectors `s`  | `2ⁿ / n!`      |
//! | `cuboid:n`    | cube stretched ×100 on one axis, sheared once | `100·2ⁿ` |
//! | `rh:n:m`      | `m` random tangent planes `u·x ≤ 1` of the unit sphere | unknown |
//! | `ran:n:m`     | integer rows in `[−1000, 1000]`, `b = 1000` | unknown |
//!
//! Any family accepts `shear=K` (apply `K` random unimodular shears) and `seed=S`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{norm_sq, Matrix};
use crate::polytope::Polytope;
use crate::rng::{self, Stream};

const MAX_DRAWS: usize = 100;

pub fn gen_cube(n: usize) -> Result<Polytope> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    let mut a = Matrix::zeros(2 * n, n);
    for i in 0..n {
        a[(2 * i, i)] = 1.0;
        a[(2 * i + 1, i)] = -1.0;
    }
    Polytope::new(a, vec![1.0; 2 * n])
}

/// The ℓ₁ unit ball.
pub fn gen_cross(n: usize) -> Result<Polytope> {
    if n == 0 || n > 20 {
        return Err(Error::InvalidParameter(format!(
            "cross polytope needs 1 ≤ n ≤ 20 (2ⁿ rows), got {n}"
        )));
    }
    let m = 1usize << n;
    let mut a = Matrix::zeros(m, n);
    for s in 0..m {
        for j in 0..n {
            a[(s, j)] = if s >> j & 1 == 1 { -1.0 } else { 1.0 };
        }
    }
    Polytope::new(a, vec![1.0; m])
}

/// `{x + offset : x ∈ P}`.
pub fn translate(p: &Polytope, offset: &[f64]) -> Result<Polytope> {
    let b = p
        .a()
        .row_iter()
        .zip(p.b())
        .map(|(row, &bi)| bi + crate::linalg::dot(row, offset))
        .collect();
    Polytope::new(p.a().clone(), b)
}

/// Stretches `P` by `factor` along `axis`.
pub fn scale_axis(p: &Polytope, axis: usize, factor: f64) -> Result<Polytope> {
    let mut a = p.a().clone();
    for i in 0..a.rows() {
        a[(i, axis)] /= factor;
    }
    Polytope::new(a, p.b().to_vec())
}

/// A random volume-preserving map `S = R · [[I, M], [0, I]] · C` with row and
/// column permutations `R`, `C` and `M` uniform on `[−1, 1]`.
#[derive(Clone, Debug)]
pub struct ShearSpec {
    /// Sizes `(p, q)` of the identity blocks, `p + q = n`.
    pub block_split: (usize, usize),
    /// The `p × q` off-diagonal block.
    pub m: Matrix,
    /// Row permutation then column permutation: `(R x)_i = x_{row_perm[i]}`.
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
}

impl ShearSpec {
    pub fn random(n: usize, rng: &mut Stream) -> Self {
        let p = n.div_ceil(2);
        let q = n - p;
        let m = Matrix::from_row_major(p, q, (0..p * q).map(|_| rng.random_range(-1.0..=1.0)).collect());
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        row_perm.shuffle(rng);
        col_perm.shuffle(rng);
        ShearSpec {
            block_split: (p, q),
            m,
            row_perm,
            col_perm,
        }
    }

    fn dim(&self) -> usize {
        self.block_split.0 + self.block_split.1
    }

    fn block(&self, sign: f64) -> Matrix {
        let n = self.dim();
        let (p, q) = self.block_split;
        let mut b = Matrix::identity(n);
        for i in 0..p {
            for j in 0..q {
                b[(i, p + j)] = sign * self.m[(i, j)];
            }
        }
        b
    }

    fn permutation(perm: &[usize]) -> Matrix {
        let mut pm = Matrix::zeros(perm.len(), perm.len());
        for (i, &j) in perm.iter().enumerate() {
            pm[(i, j)] = 1.0;
        }
        pm
    }

    /// The point map `S`.
    pub fn matrix(&self) -> Matrix {
        Self::permutation(&self.row_perm)
            .matmul(&self.block(1.0))
            .matmul(&Self::permutation(&self.col_perm))
    }

    /// `S⁻¹ = Cᵀ [[I, −M], [0, I]] Rᵀ`.
    pub fn inverse_matrix(&self) -> Matrix {
        Self::permutation(&self.col_perm)
            .transpose()
            .matmul(&self.block(-1.0))
            .matmul(&Self::permutation(&self.row_perm).transpose())
    }
}

/// Image of `P` under the linear map with inverse `s_inv`: `{S x} = {y : A S⁻¹ y ≤ b}`.
pub fn apply_linear_map(p: &Polytope, s_inv: &Matrix) -> Result<Polytope> {
    Polytope::new(p.a().matmul(s_inv), p.b().to_vec())
}

/// Applies `times` independent random shears.
pub fn apply_shear(p: &Polytope, times: usize, seed: u64) -> Result<Polytope> {
    let mut rng = rng::stream(seed);
    let mut a = p.a().clone();
    for _ in 0..times {
        a = a.matmul(&ShearSpec::random(p.dim(), &mut rng).inverse_matrix());
    }
    Polytope::new(a, p.b().to_vec())
}

/// A generated instance and how many draws it took to get a bounded one.
#[derive(Clone, Debug)]
pub struct Drawn {
    pub polytope: Polytope,
    pub draws: usize,
}

fn redraw(mut draw: impl FnMut() -> (Matrix, Vec<f64>)) -> Result<Drawn> {
    for attempt in 1..=MAX_DRAWS {
        let (a, b) = draw();
        match Polytope::new(a, b) {
            Ok(polytope) => {
                return Ok(Drawn {
                    polytope,
                    draws: attempt,
                })
            }
            Err(Error::Unbounded { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenerationFailed { attempts: MAX_DRAWS })
}

/// `m` half-spaces tangent to the unit sphere at uniformly random points.
pub fn gen_rh(n: usize, m: usize, seed: u64) -> Result<Drawn> {
    if n == 0 || m < 2 * n {
        return Err(Error::InvalidParameter(format!(
            "rh needs m ≥ 2n, got n = {n}, m = {m}"
        )));
    }
    let mut rng = rng::stream(seed);
    redraw(|| {
        let mut data = Vec::with_capacity(m * n);
        for _ in 0..m {
            let u = loop {
                let u: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
                let len = norm_sq(&u).sqrt();
                if len > 1e-12 {
                    break u.into_iter().map(|v| v / len).collect::<Vec<_>>();
                }
            };
            data.extend(u);
        }
        (Matrix::from_row_major(m, n, data), vec![1.0; m])
    })
}

/// rh-style instance from fixed tangent points (no randomness).
pub fn rh_from_normals(normals: &[Vec<f64>]) -> Result<Polytope> {
    let unit: Vec<Vec<f64>> = normals
        .iter()
        .map(|u| {
            let len = norm_sq(u).sqrt();
            u.iter().map(|v| v / len).collect()
        })
        .collect();
    Polytope::new(Matrix::from_rows(&unit), vec![1.0; unit.len()])
}

/// Integer coefficients uniform on `[−1000, 1000]` with `b_i = 1000`.
pub fn gen_ran(n: usize, m: usize, seed: u64) -> Result<Drawn> {
    if n == 0 || m < n + 1 {
        return Err(Error::InvalidParameter(format!(
            "ran needs m ≥ n + 1, got n = {n}, m = {m}"
        )));
    }
    let mut rng = rng::stream(seed);
    redraw(|| {
        let mut data = Vec::with_capacity(m * n);
        for _ in 0..m {
            loop {
                let row: Vec<f64> = (0..n).map(|_| rng.random_range(-1000i32..=1000) as f64).collect();
                if row.iter().any(|&v| v != 0.0) {
                    data.extend(row);
                    break;
                }
            }
        }
        (Matrix::from_row_major(m, n, data), vec![1000.0; m])
    })
}

/// cube_n stretched by 100 along the first axis, then sheared once.
pub fn gen_cuboid_sheared(n: usize, seed: u64) -> Result<Polytope> {
    let stretched = scale_axis(&gen_cube(n)?, 0, 100.0)?;
    if n == 1 {
        return Ok(stretched);
    }
    apply_shear(&stretched, 1, seed)
}

/// A parsed family spec such as `cube:10`, `rh:10:30:seed=7` or `cube:10:shear=10`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub shear: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Cube { n: usize },
    Cross { n: usize },
    Cuboid { n: usize },
    Rh { n: usize, m: usize },
    Ran { n: usize, m: usize },
}

impl FamilySpec {
    /// Exact volume where a closed form exists.
    pub fn exact_volume(&self) -> Option<f64> {
        match self.family {
            Family::Cube { n } => Some(2f64.powi(n as i32)),
            Family::Cross { n } => Some(2f64.powi(n as i32) / (1..=n).map(|k| k as f64).product::<f64>()),
            Family::Cuboid { n } => Some(100.0 * 2f64.powi(n as i32)),
            Family::Rh { .. } | Family::Ran { .. } => None,
        }
    }

    pub fn build(&self) -> Result<Polytope> {
        let base = match self.family {
            Family::Cube { n } => gen_cube(n)?,
            Family::Cross { n } => gen_cross(n)?,
            Family::Cuboid { n } => gen_cuboid_sheared(n, self.seed)?,
            Family::Rh { n, m } => gen_rh(n, m, self.seed)?.polytope,
            Family::Ran { n, m } => gen_ran(n, m, self.seed)?.polytope,
        };
        if self.shear == 0 {
            return Ok(base);
        }
        // A separate stream so `shear=K` does not replay the instance draws.
        apply_shear(&base, self.shear, rng::derive_seed(self.seed, 0x5348_4541_52))
    }
}

impl std::str::FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidParameter(format!("family spec `{s}`: {msg}"));
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let mut numbers = Vec::new();
        let mut shear = 0;
        let mut seed = rng::DEFAULT_SEED;
        for part in parts {
            if let Some((key, value)) = part.split_once('=') {
                let v: u64 = value
                    .parse()
                    .map_err(|_| bad(format!("`{value}` is not an integer")))?;
                match key {
                    "seed" => seed = v,
                    "shear" => shear = v as usize,
                    other => return Err(bad(format!("unknown option `{other}`"))),
                }
            } else {
                numbers.push(
                    part.parse::<usize>()
                        .map_err(|_| bad(format!("`{part}` is not an integer")))?,
                );
            }
        }
        let family = match (name, numbers.as_slice()) {
            ("cube", &[n]) => Family::Cube { n },
            ("cross", &[n]) => Family::Cross { n },
            ("cuboid", &[n]) => Family::Cuboid { n },
            ("rh", &[n, m]) => Family::Rh { n, m },
            ("ran", &[n, m]) => Family::Ran { n, m },
            _ => return Err(bad("expected cube:N, cross:N, cuboid:N, rh:N:M or ran:N:M".into())),
        };
        Ok(FamilySpec {
            family,
            shear,
            seed,
        })
    }
}
