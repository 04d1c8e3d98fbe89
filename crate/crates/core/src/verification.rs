//! Independent checks on the estimator: a rejection-sampling oracle,
//! repeated-trial statistics, hyperplane-split additivity, and walk benchmarks.

use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{estimate_rounded, estimate_volume, EstimationConfig};
use crate::linalg::{dot, norm_sq};
use crate::polytope::Polytope;
use crate::rng;
use crate::rounding::round_polytope;
use crate::sampling::{WalkKind, Walker};

/// Rejection sampling is only attempted up to this dimension.
pub const ORACLE_MAX_DIM: usize = 8;
const ORACLE_CHUNK: u64 = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleEstimate {
    pub volume: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub box_volume: f64,
}

/// Brute-force volume: uniform points in the LP bounding box, counted by exact membership.
pub fn oracle_volume(p: &Polytope, samples: u64, seed: u64) -> Result<OracleEstimate> {
    let n = p.dim();
    if n > ORACLE_MAX_DIM {
        return Err(Error::OracleDimension {
            n,
            max: ORACLE_MAX_DIM,
        });
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("oracle needs at least one sample".into()));
    }
    let bounds = p.axis_bounds()?;
    let box_volume = bounds.box_volume();
    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = ORACLE_CHUNK.min(samples - c * ORACLE_CHUNK);
            let mut rng = rng::stream(rng::derive_seed(seed, c));
            let mut x = vec![0.0; n];
            let mut hits = 0u64;
            for _ in 0..count {
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj = bounds.lower[j] + rng.random::<f64>() * (bounds.upper[j] - bounds.lower[j]);
                }
                if p.contains_unchecked(&x) {
                    hits += 1;
                }
            }
            hits
        })
        .sum();
    let frac = hits as f64 / samples as f64;
    Ok(OracleEstimate {
        volume: box_volume * frac,
        standard_error: box_volume * (frac * (1.0 - frac) / samples as f64).sqrt(),
        samples,
        box_volume,
    })
}

/// Summary of repeated estimates: mean, sample deviation and the
/// `mean ± 1.96σ` interval with the number of trials falling inside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialStatistics {
    pub trials: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub coverage_count: usize,
    pub epsilon_observed: f64,
}

impl TrialStatistics {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        let k = values.len();
        if k < 2 {
            return Err(Error::InvalidParameter("statistics need at least two trials".into()));
        }
        let mean = values.iter().sum::<f64>() / k as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
        let std_dev = var.sqrt();
        let ci_low = mean - 1.96 * std_dev;
        let ci_high = mean + 1.96 * std_dev;
        let coverage_count = values.iter().filter(|&&v| v >= ci_low && v <= ci_high).count();
        Ok(TrialStatistics {
            trials: k,
            mean,
            std_dev,
            ci_low,
            ci_high,
            coverage_count,
            epsilon_observed: (ci_high - ci_low) / mean,
        })
    }

    /// Standard error of the mean.
    pub fn standard_error(&self) -> f64 {
        self.std_dev / (self.trials as f64).sqrt()
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.ci_low && v <= self.ci_high
    }
}

/// Runs `trials` estimates with seeds `derive_seed(config.seed, i)` through `estimate`.
///
/// Work is spread over the current rayon pool; results are aggregated in trial order.
pub fn run_trials_with<F>(config: &EstimationConfig, trials: usize, estimate: F) -> Result<(TrialStatistics, Vec<f64>)>
where
    F: Fn(&EstimationConfig) -> Result<f64> + Sync,
{
    if trials < 2 {
        return Err(Error::InvalidParameter("need at least two trials".into()));
    }
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            estimate(&config.with_seed(rng::derive_seed(config.seed, i as u64))).map_err(|e| Error::Trial {
                index: i,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    Ok((TrialStatistics::from_values(&values)?, values))
}

/// Repeated estimates of one polytope. Rounding is deterministic, so it runs once.
pub fn run_trials(p: &Polytope, config: &EstimationConfig, trials: usize) -> Result<TrialStatistics> {
    run_trials_values(p, config, trials).map(|(s, _)| s)
}

/// As [`run_trials`], also returning the individual volumes.
pub fn run_trials_values(p: &Polytope, config: &EstimationConfig, trials: usize) -> Result<(TrialStatistics, Vec<f64>)> {
    let rounded = round_polytope(p, 1.0 / config.sandwich_ratio(p.dim()))?;
    run_trials_with(config, trials, |cfg| estimate_rounded(&rounded, cfg).map(|r| r.volume))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitCheck {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub whole: f64,
    pub part1: f64,
    pub part2: f64,
    pub sum: f64,
    /// `|sum − whole| / whole` for this check's own estimates.
    pub error: f64,
    /// Whether `sum` lies in the reference 95% interval of the whole volume.
    pub in_interval: bool,
}

/// Cuts `P` by a random hyperplane through the rounding center and estimates
/// the whole and both parts. `reference` supplies the 95% interval.
pub fn split_check(p: &Polytope, config: &EstimationConfig, seed: u64, reference: &TrialStatistics) -> Result<SplitCheck> {
    let n = p.dim();
    let center = round_polytope(p, 1.0 / config.sandwich_ratio(n))?.center;
    let mut rng = rng::stream(seed);
    const ATTEMPTS: usize = 100;
    for _ in 0..ATTEMPTS {
        let mut normal: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let len = norm_sq(&normal).sqrt();
        if len < 1e-12 {
            continue;
        }
        normal.iter_mut().for_each(|v| *v /= len);
        let offset = dot(&normal, &center);
        // Both sides must keep some thickness.
        let hi = p.lp_maximize(&normal)?.value();
        let neg: Vec<f64> = normal.iter().map(|v| -v).collect();
        let lo = p.lp_maximize(&neg)?.value().map(|v| -v);
        let (Some(hi), Some(lo)) = (hi, lo) else { continue };
        let margin = 1e-6 * (hi - lo);
        if !(hi - offset > margin && offset - lo > margin) {
            continue;
        }
        let (Ok(p1), Ok(p2)) = (p.with_constraint(&normal, offset), p.with_constraint(&neg, -offset)) else {
            continue;
        };
        let whole = estimate_volume(p, &config.with_seed(rng::derive_seed(seed, 0)))?.volume;
        let part1 = estimate_volume(&p1, &config.with_seed(rng::derive_seed(seed, 1)))?.volume;
        let part2 = estimate_volume(&p2, &config.with_seed(rng::derive_seed(seed, 2)))?.volume;
        let sum = part1 + part2;
        return Ok(SplitCheck {
            normal,
            offset,
            whole,
            part1,
            part2,
            sum,
            error: (sum - whole).abs() / whole,
            in_interval: reference.contains(sum),
        });
    }
    Err(Error::SplitFailed { attempts: ATTEMPTS })
}

/// Aggregate of repeated split checks against one reference trials run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitStudy {
    pub reference: TrialStatistics,
    pub checks: Vec<SplitCheck>,
    pub mean_part1: f64,
    pub mean_part2: f64,
    pub mean_sum: f64,
    /// `|mean(sum) − mean(whole)| / mean(whole)` with the whole from the reference trials.
    pub error: f64,
    /// Mean of the per-check errors.
    pub mean_check_error: f64,
    pub in_interval: usize,
}

pub fn split_study(p: &Polytope, config: &EstimationConfig, checks: usize, trials: usize) -> Result<SplitStudy> {
    if checks == 0 {
        return Err(Error::InvalidParameter("need at least one split check".into()));
    }
    let reference = run_trials(p, config, trials)?;
    let base = rng::derive_seed(config.seed, 0x5350_4c49_54);
    let checks: Vec<SplitCheck> = (0..checks)
        .into_par_iter()
        .map(|i| split_check(p, config, rng::derive_seed(base, i as u64), &reference))
        .collect::<Result<_>>()?;
    let k = checks.len() as f64;
    let mean_part1 = checks.iter().map(|c| c.part1).sum::<f64>() / k;
    let mean_part2 = checks.iter().map(|c| c.part2).sum::<f64>() / k;
    let mean_sum = mean_part1 + mean_part2;
    Ok(SplitStudy {
        error: (mean_sum - reference.mean).abs() / reference.mean,
        mean_check_error: checks.iter().map(|c| c.error).sum::<f64>() / k,
        in_interval: checks.iter().filter(|c| c.in_interval).count(),
        mean_part1,
        mean_part2,
        mean_sum,
        reference,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkBenchmark {
    pub steps: u64,
    pub coordinate_time: Duration,
    pub hypersphere_time: Duration,
    /// `hypersphere_time / coordinate_time`; absent when nothing was timed.
    pub ratio: Option<f64>,
}

/// Times `steps` steps of each walker in the outermost body `K_l` of the rounded polytope.
pub fn walk_benchmark(p: &Polytope, steps: u64, seed: u64) -> Result<WalkBenchmark> {
    let n = p.dim();
    let config = EstimationConfig::default();
    let rounded = round_polytope(p, 1.0 / config.sandwich_ratio(n))?;
    let radius = 2f64.powf(config.phases(n) as f64 / n as f64);
    let time = |kind: WalkKind| -> Result<Duration> {
        let mut w = Walker::new(&rounded.polytope, radius, vec![0.0; n], rng::stream(seed))?;
        let start = Instant::now();
        for _ in 0..steps {
            w.step(kind)?;
        }
        let elapsed = start.elapsed();
        std::hint::black_box(w.point());
        Ok(elapsed)
    };
    let coordinate_time = time(WalkKind::Coordinate)?;
    let hypersphere_time = time(WalkKind::Hypersphere)?;
    let ratio = (steps > 0 && coordinate_time > Duration::ZERO)
        .then(|| hypersphere_time.as_secs_f64() / coordinate_time.as_secs_f64());
    Ok(WalkBenchmark {
        steps,
        coordinate_time,
        hypersphere_time,
        ratio,
    })
}

/// An instance with a known volume.
#[derive(Clone, Debug)]
pub struct KnownInstance {
    pub name: String,
    pub polytope: Polytope,
    pub exact: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracySummary {
    pub mean: f64,
    pub relative_error: f64,
    pub std_dev: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyRow {
    pub name: String,
    pub exact: f64,
    pub left: AccuracySummary,
    pub right: AccuracySummary,
}

/// Runs the same trials under two configurations, side by side.
pub fn compare_configs(
    instances: &[KnownInstance],
    left: &EstimationConfig,
    right: &EstimationConfig,
    trials: usize,
) -> Result<Vec<AccuracyRow>> {
    let summarize = |inst: &KnownInstance, cfg: &EstimationConfig| -> Result<AccuracySummary> {
        let s = run_trials(&inst.polytope, cfg, trials)?;
        Ok(AccuracySummary {
            mean: s.mean,
            relative_error: (s.mean - inst.exact).abs() / inst.exact,
            std_dev: s.std_dev,
        })
    };
    instances
        .iter()
        .map(|inst| {
            Ok(AccuracyRow {
                name: inst.name.clone(),
                exact: inst.exact,
                left: summarize(inst, left)?,
                right: summarize(inst, right)?,
            })
        })
        .collect()
}

/// Coordinate walk (left) against hypersphere walk (right) under otherwise equal settings.
pub fn accuracy_comparison(instances: &[KnownInstance], config: &EstimationConfig, trials: usize) -> Result<Vec<AccuracyRow>> {
    let left = EstimationConfig {
        walk: WalkKind::Coordinate,
        ..config.clone()
    };
    let right = EstimationConfig {
        walk: WalkKind::Hypersphere,
        ..config.clone()
    };
    compare_configs(instances, &left, &right, trials)
}

/// Tab-separated rendering of an accuracy table.
pub fn accuracy_table(rows: &[AccuracyRow]) -> String {
    let mut out = String::from("instance\texact\tmean_left\terr_left\tsd_left\tmean_right\terr_right\tsd_right\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\n",
            r.name,
            r.exact,
            r.left.mean,
            r.left.relative_error,
            r.left.std_dev,
            r.right.mean,
            r.right.relative_error,
            r.right.std_dev
        ));
    }
    out
}

/// Two-sample Kolmogorov–Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let v = a[i].min(b[j]);
        while i < a.len() && a[i] <= v {
            i += 1;
        }
        while j < b.len() && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    let lambda = (ne + 0.12 + 0.11 / ne) * d;
    (d, kolmogorov_q(lambda))
}

/// `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}
