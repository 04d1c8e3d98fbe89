//! Multiphase Monte Carlo volume estimation with sample reuse.
//!
//! After rounding, the body `P` satisfies `B(0,1) ⊆ P ⊆ B(0,r)`. With
//! `l = ⌈n log₂ r⌉` concentric balls `B_i = B(0, 2^{i/n})` and
//! `K_i = B_i ∩ P`,
//!
//! ```text
//! vol(P) = vol(B(0,1)) · Π_{i<l} vol(K_{i+1}) / vol(K_i)
//! ```
//!
//! Ratios are estimated from the outermost body inward. Every walk point is
//! binned by the innermost `K_i` containing it, so the points of phase `k`
//! that land in `K_k` are reused as samples for phase `k − 1`.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::Polytope;
use crate::rng;
use crate::rounding::{round_polytope, RoundedPolytope};
use crate::sampling::{WalkKind, Walker};

/// Points per phase per ball, the constant in `step_size = 1600 · l`.
pub const POINTS_PER_PHASE_FACTOR: usize = 1600;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimationConfig {
    /// Points per phase. `None` means `1600 · l`.
    pub step_size: Option<usize>,
    /// Sandwich ratio. `None` means `2n`.
    pub r: Option<f64>,
    /// Target relative width of the 95% interval.
    pub epsilon: f64,
    /// Normal quantile for that interval.
    pub sigma: f64,
    pub seed: u64,
    pub walk: WalkKind,
    pub reuse: bool,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        EstimationConfig {
            step_size: None,
            r: None,
            epsilon: 0.2,
            sigma: 1.96,
            seed: rng::DEFAULT_SEED,
            walk: WalkKind::Coordinate,
            reuse: true,
        }
    }
}

impl EstimationConfig {
    pub fn with_seed(&self, seed: u64) -> Self {
        EstimationConfig {
            seed,
            ..self.clone()
        }
    }

    pub fn sandwich_ratio(&self, n: usize) -> f64 {
        self.r.unwrap_or(2.0 * n as f64)
    }

    /// `l = ⌈n log₂ r⌉`.
    pub fn phases(&self, n: usize) -> usize {
        ((n as f64) * self.sandwich_ratio(n).log2()).ceil() as usize
    }

    pub fn points_per_phase(&self, n: usize) -> usize {
        self.step_size
            .unwrap_or(POINTS_PER_PHASE_FACTOR * self.phases(n))
    }

    fn validate(&self, n: usize) -> Result<()> {
        let r = self.sandwich_ratio(n);
        if !(r > n as f64) || !r.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sandwich ratio r must exceed n = {n}, got {r}"
            )));
        }
        if self.step_size == Some(0) {
            return Err(Error::InvalidParameter("step_size must be at least 1".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive, got {}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Per-phase bookkeeping of the reverse-order loop.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseLedger {
    /// `t[i]` counts retained points that fell in `K_i \ K_{i−1}`.
    pub t: Vec<u64>,
    /// Points of the last phase that lie in its inner body.
    pub count: u64,
    /// Estimated `α_k`, indexed by `k`.
    pub alpha: Vec<f64>,
    pub fresh_points: u64,
    /// Fresh points generated in phase `k`, indexed by `k`.
    pub fresh_per_phase: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub volume: f64,
    pub gamma: f64,
    pub dim: usize,
    pub l: usize,
    pub step_size: usize,
    pub alphas: Vec<f64>,
    pub fresh_points: u64,
    pub reused_fraction: f64,
    /// Points per phase that would keep the 95% interval within `epsilon`.
    pub required_step_size: Option<u64>,
    pub walk: WalkKind,
    pub reuse: bool,
    pub seed: u64,
    pub rounding_iterations: usize,
    #[serde(with = "duration_ms")]
    pub elapsed: Duration,
    pub ledger: PhaseLedger,
}

mod duration_ms {
    use serde::{Deserialize, Deserializer, Serializer};
    use std::time::Duration;

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(d.as_secs_f64() * 1e3)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_secs_f64(f64::deserialize(d)? / 1e3))
    }
}

impl EstimateReport {
    /// `γ · vol(B(0,1)) · Π α`, recomputed from the stored fields.
    pub fn recompute_volume(&self) -> f64 {
        volume_from_ratios(self.gamma, self.dim, &self.alphas)
    }

    /// Fraction of `step_size · l` that had to be generated fresh.
    pub fn fresh_fraction(&self) -> f64 {
        self.fresh_points as f64 / (self.step_size as f64 * self.l as f64)
    }

    /// The machine-readable record printed by the CLI (`"schema": 1`).
    pub fn to_record(&self) -> serde_json::Value {
        serde_json::json!({
            "schema": 1,
            "volume": self.volume,
            "gamma": self.gamma,
            "l": self.l,
            "alphas": self.alphas,
            "fresh_points": self.fresh_points,
            "reused_fraction": self.reused_fraction,
            "seed": self.seed,
            "walk": self.walk,
            "elapsed_ms": self.elapsed.as_secs_f64() * 1e3,
        })
    }
}

fn volume_from_ratios(gamma: f64, n: usize, alphas: &[f64]) -> f64 {
    let log = gamma.ln() + unit_ball_volume(n).ln() + alphas.iter().map(|a| a.ln()).sum::<f64>();
    log.exp()
}

/// `π^{n/2} / Γ(n/2 + 1)`, via `V_n = V_{n−2} · 2π / n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let mut v = if n % 2 == 0 { 1.0 } else { 2.0 };
    let mut k = if n % 2 == 0 { 2 } else { 3 };
    while k <= n {
        v *= 2.0 * std::f64::consts::PI / k as f64;
        k += 2;
    }
    v
}

/// Radii `2^{i/n}` for `i = 0..=l` and the matching bin lookup.
#[derive(Clone, Debug)]
pub struct BallShells {
    n: usize,
    radii: Vec<f64>,
    radii_sq: Vec<f64>,
}

impl BallShells {
    pub fn new(n: usize, l: usize) -> Self {
        let radii: Vec<f64> = (0..=l).map(|i| 2f64.powf(i as f64 / n as f64)).collect();
        let radii_sq = radii.iter().map(|r| r * r).collect();
        BallShells { n, radii, radii_sq }
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.radii[i]
    }

    pub fn l(&self) -> usize {
        self.radii.len() - 1
    }

    /// Smallest `i` with `‖x‖ ≤ 2^{i/n}`, clamped to `[0, l]`.
    ///
    /// The closed form `⌈(n/2) log₂‖x‖²⌉` gives the guess; the radius table
    /// settles points sitting on a sphere up to rounding.
    #[inline]
    pub fn index(&self, norm_sq: f64) -> usize {
        let l = self.l();
        if norm_sq <= 1.0 {
            return 0;
        }
        let guess = (0.5 * self.n as f64 * norm_sq.log2()).ceil();
        let mut i = if guess >= l as f64 { l } else { guess.max(0.0) as usize };
        while i > 0 && norm_sq <= self.radii_sq[i - 1] {
            i -= 1;
        }
        while i < l && norm_sq > self.radii_sq[i] {
            i += 1;
        }
        i
    }
}

/// Index of the shell `K_i \ K_{i−1}` containing `x`, for `l` phases in dimension `n`.
pub fn ball_index(x: &[f64], n: usize, l: usize) -> usize {
    BallShells::new(n, l).index(crate::linalg::norm_sq(x))
}

/// Smallest per-phase sample count keeping the 95% interval width within
/// `epsilon` of the volume, under a variance model of twice the binomial
/// standard deviation per ratio.
///
/// With `b = Π (1 + 4(α_i − 1)/step_size)`, the interval condition reduces to
/// `ε²σ² b² − (2ε²(1+σ²) + 4) b + ε²(1/σ + σ)² + 4 ≥ 0`, which holds for
/// `b ≤ b₁` (the smaller root). Since `α_i ≤ 2`, `(1 + 4/step_size)^l ≤ b₁`
/// suffices, i.e. `step_size ≥ 4 / (b₁^{1/l} − 1)`.
pub fn required_step_size(epsilon: f64, sigma: f64, l: usize) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) || !(sigma > 0.0) || l == 0 {
        return Err(Error::InvalidParameter(format!(
            "need 0 < epsilon < 1, sigma > 0, l ≥ 1 (got {epsilon}, {sigma}, {l})"
        )));
    }
    let b1 = variance_factor_bound(epsilon, sigma)?;
    let per_phase = (b1.ln() / l as f64).exp_m1();
    Ok((4.0 / per_phase).ceil() as u64)
}

/// Smaller root of the interval quadratic; must exceed 1.
pub fn variance_factor_bound(epsilon: f64, sigma: f64) -> Result<f64> {
    let e2 = epsilon * epsilon;
    let qa = e2 * sigma * sigma;
    let qb = -2.0 * e2 * (1.0 + sigma * sigma) - 4.0;
    let qc = e2 * (1.0 / sigma + sigma).powi(2) + 4.0;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Err(Error::InvalidParameter(
            "interval quadratic has no real root".into(),
        ));
    }
    // qb < 0, so q > 0 and c/q is the smaller root without cancellation.
    let q = 0.5 * (-qb + disc.sqrt());
    let root = qc / q;
    if !(root > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "interval quadratic has no root above 1 (smaller root {root})"
        )));
    }
    Ok(root)
}

/// Expected number of points reused instead of regenerated,
/// `Σ_{i=1}^{l−1} step_size / α_i`, rounded to the nearest integer.
pub fn expected_reuse_savings(alphas: &[f64], step_size: usize) -> u64 {
    alphas
        .iter()
        .skip(1)
        .map(|a| step_size as f64 / a)
        .sum::<f64>()
        .round() as u64
}

/// Rounds `q` with `β = 1/r` and estimates its volume.
pub fn estimate_volume(q: &Polytope, config: &EstimationConfig) -> Result<EstimateReport> {
    let started = Instant::now();
    let n = q.dim();
    config.validate(n)?;
    let rounded = round_polytope(q, 1.0 / config.sandwich_ratio(n))?;
    let mut report = estimate_rounded(&rounded, config)?;
    report.elapsed = started.elapsed();
    Ok(report)
}

/// Estimates the volume of the polytope behind an existing rounding.
pub fn estimate_rounded(rounded: &RoundedPolytope, config: &EstimationConfig) -> Result<EstimateReport> {
    let started = Instant::now();
    let p = &rounded.polytope;
    let n = p.dim();
    config.validate(n)?;
    let l = config.phases(n);
    let step_size = config.points_per_phase(n);
    let shells = BallShells::new(n, l);
    let shrink = 2f64.powf(-1.0 / n as f64);

    let mut ledger = PhaseLedger {
        t: vec![0; l + 1],
        count: 0,
        alpha: vec![0.0; l],
        fresh_points: 0,
        fresh_per_phase: vec![0; l],
    };
    let mut walker = Walker::new(p, shells.radius(l), vec![0.0; n], rng::stream(config.seed))?;

    for k in (0..l).rev() {
        walker.set_radius(shells.radius(k + 1));
        let fresh = step_size as u64 - ledger.count;
        for _ in 0..fresh {
            walker.step(config.walk)?;
            ledger.t[shells.index(walker.norm_sq())] += 1;
        }
        ledger.fresh_points += fresh;
        ledger.fresh_per_phase[k] = fresh;
        ledger.count = ledger.t[..=k].iter().sum();
        if ledger.count == 0 {
            return Err(Error::EmptyPhase { phase: k });
        }
        ledger.alpha[k] = step_size as f64 / ledger.count as f64;
        if !config.reuse {
            ledger.t.iter_mut().for_each(|t| *t = 0);
            ledger.count = 0;
        }
        if k > 0 {
            let next: Vec<f64> = walker.point().iter().map(|v| v * shrink).collect();
            walker.set_radius(shells.radius(k));
            walker
                .set_point(next)
                .map_err(|_| Error::StartOutside { phase: k - 1 })?;
        }
    }

    let volume = volume_from_ratios(rounded.gamma, n, &ledger.alpha);
    let total = step_size as f64 * l as f64;
    Ok(EstimateReport {
        volume,
        gamma: rounded.gamma,
        dim: n,
        l,
        step_size,
        alphas: ledger.alpha.clone(),
        fresh_points: ledger.fresh_points,
        reused_fraction: 1.0 - ledger.fresh_points as f64 / total,
        required_step_size: required_step_size(config.epsilon, config.sigma, l.max(1)).ok(),
        walk: config.walk,
        reuse: config.reuse,
        seed: config.seed,
        rounding_iterations: rounded.iterations,
        elapsed: started.elapsed(),
        ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn unit_ball_small_dims() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        assert_eq!(unit_ball_volume(0), 1.0);
    }

    #[test]
    fn ball_index_cases() {
        assert_eq!(ball_index(&[0.3, 0.4], 2, 4), 0);
        assert_eq!(ball_index(&[1.0, 0.0], 2, 4), 0);
        let mut x = vec![0.0; 10];
        x[0] = 1.5;
        // ⌈10 · log₂ 1.5⌉ = ⌈5.85⌉
        assert_eq!(ball_index(&x, 10, 44), 6);
        x[0] = 2f64.powf(0.3);
        assert_eq!(ball_index(&x, 10, 44), 3);
        x[0] = 1e6;
        assert_eq!(ball_index(&x, 10, 44), 44);
    }

    #[test]
    fn shells_bracket_norms() {
        let shells = BallShells::new(7, 27);
        for step in 1..2000 {
            let r = 1.0 + step as f64 * 0.006;
            let i = shells.index(r * r);
            if i > 0 && i < 27 {
                assert!(r > shells.radius(i - 1) && r <= shells.radius(i));
            }
        }
    }

    #[test]
    fn savings_formula() {
        assert_eq!(expected_reuse_savings(&[2.0; 10], 100), 450);
        assert_eq!(expected_reuse_savings(&[1.0; 10], 100), 900);
    }

    #[test]
    fn step_size_monotone_in_epsilon() {
        let mut last = u64::MAX;
        for eps in [0.05, 0.1, 0.2, 0.3, 0.5] {
            let s = required_step_size(eps, 1.96, 44).unwrap();
            assert!(s < last);
            last = s;
        }
        assert!(required_step_size(0.0, 1.96, 10).is_err());
        assert!(required_step_size(0.2, 1.96, 0).is_err());
    }

    #[test]
    fn report_recomputes_and_counts_points() {
        let p = generators::gen_cube(3).unwrap();
        let cfg = EstimationConfig::default().with_seed(3);
        let rep = estimate_volume(&p, &cfg).unwrap();
        assert!((rep.recompute_volume() - rep.volume).abs() <= 1e-12 * rep.volume);
        for k in 0..rep.l {
            assert!(rep.alphas[k] >= 1.0);
        }
        let reused: u64 = rep.ledger.fresh_per_phase.iter().map(|f| rep.step_size as u64 - f).sum();
        assert_eq!(rep.fresh_points + reused, (rep.step_size * rep.l) as u64);
        assert_eq!(rep.ledger.fresh_per_phase[rep.l - 1], rep.step_size as u64);
    }

    #[test]
    fn no_reuse_generates_everything() {
        let p = generators::gen_cube(3).unwrap();
        let cfg = EstimationConfig {
            reuse: false,
            ..EstimationConfig::default()
        };
        let rep = estimate_volume(&p, &cfg).unwrap();
        assert_eq!(rep.fresh_points, (rep.step_size * rep.l) as u64);
        assert_eq!(rep.fresh_fraction(), 1.0);
    }

    #[test]
    fn tiny_step_size_can_fail_loudly() {
        // One point per phase: some phase will see no inner hit.
        let p = generators::gen_cross(6).unwrap();
        let cfg = EstimationConfig {
            step_size: Some(1),
            ..EstimationConfig::default()
        };
        let outcomes: Vec<_> = (0..20).map(|s| estimate_volume(&p, &cfg.with_seed(s))).collect();
        assert!(outcomes
            .iter()
            .any(|o| matches!(o, Err(Error::EmptyPhase { .. }))));
    }

    #[test]
    fn rejects_small_ratio() {
        let p = generators::gen_cube(3).unwrap();
        let cfg = EstimationConfig {
            r: Some(3.0),
            ..EstimationConfig::default()
        };
        assert!(estimate_volume(&p, &cfg).is_err());
    }
}
