//! Command-line front end. `src/bin/polyvol.rs` only forwards to [`run`].
//!
//! Exit codes: 0 success, 1 validation or estimation failure, 2 usage error.
//! Failures print one line `error[<code>]: <message>` on stderr.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::estimator::{estimate_volume, required_step_size, EstimationConfig};
use crate::format::{emit_polytope, read_polytope};
use crate::generators::FamilySpec;
use crate::polytope::Polytope;
use crate::rng::DEFAULT_SEED;
use crate::sampling::WalkKind;
use crate::verification::{oracle_volume, run_trials, split_study, walk_benchmark};

#[derive(Parser, Debug)]
#[command(name = "polyvol", version, about = "Volume estimation for H-polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the volume of one polytope.
    Estimate(EstimateArgs),
    /// Write a generated instance in the text format.
    Generate {
        /// Family spec, e.g. `cube:10` or `rh:10:30:seed=7`.
        spec: String,
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
    /// Repeat the estimate with derived seeds and summarize.
    Trials(TrialsArgs),
    /// Hyperplane-split additivity checks.
    CheckSplit(CheckSplitArgs),
    /// Time both hit-and-run walkers.
    BenchWalk {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 10_000_000)]
        steps: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Points per phase needed for a target interval width.
    StepSize {
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.96)]
        sigma: f64,
        #[arg(long)]
        l: usize,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Instance file.
    #[arg(long)]
    input: Option<std::path::PathBuf>,
    /// Family spec instead of a file.
    #[arg(long)]
    generate: Option<String>,
}

impl InputArgs {
    fn load(&self) -> Result<Polytope> {
        match (&self.input, &self.generate) {
            (Some(path), None) => read_polytope(path),
            (None, Some(spec)) => spec.parse::<FamilySpec>()?.build(),
            _ => unreachable!("clap enforces exactly one input"),
        }
    }
}

#[derive(Args, Debug)]
struct ConfigArgs {
    #[arg(long = "step-size")]
    step_size: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, default_value_t = 0.2)]
    epsilon: f64,
    #[arg(long, default_value_t = 1.96)]
    sigma: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Walk::Coordinate)]
    walk: Walk,
    #[arg(long = "no-reuse")]
    no_reuse: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

impl ConfigArgs {
    fn config(&self) -> EstimationConfig {
        EstimationConfig {
            step_size: self.step_size,
            r: self.r,
            epsilon: self.epsilon,
            sigma: self.sigma,
            seed: self.seed,
            walk: self.walk.into(),
            reuse: !self.no_reuse,
        }
    }
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    /// Also print the phase ledger.
    #[arg(long, short)]
    verbose: bool,
    /// Also run the rejection oracle with this many samples (n ≤ 8).
    #[arg(long)]
    samples: Option<u64>,
}

#[derive(Args, Debug)]
struct TrialsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct CheckSplitArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    config: ConfigArgs,
    #[arg(long, default_value_t = 20)]
    checks: usize,
    /// Trials behind the reference interval.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Walk {
    Coordinate,
    Hypersphere,
}

impl From<Walk> for WalkKind {
    fn from(w: Walk) -> Self {
        match w {
            Walk::Coordinate => WalkKind::Coordinate,
            Walk::Hypersphere => WalkKind::Hypersphere,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn json_line(out: &mut dyn Write, mut value: serde_json::Value) -> std::io::Result<()> {
    if let Some(obj) = value.as_object_mut() {
        obj.insert("schema".into(), 1.into());
    }
    writeln!(out, "{value}")
}

fn execute(command: Command, out: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: "<stdout>".into(),
        source: e,
    };
    match command {
        Command::Estimate(args) => {
            let p = args.input.load()?;
            let rep = estimate_volume(&p, &args.config.config())?;
            let oracle = args
                .samples
                .map(|k| oracle_volume(&p, k, args.config.seed))
                .transpose()?;
            if args.config.format == Format::JsonLines {
                let mut rec = rep.to_record();
                if let Some(o) = &oracle {
                    rec["oracle"] = serde_json::to_value(o).expect("oracle serializes");
                }
                if args.verbose {
                    rec["ledger"] = serde_json::to_value(&rep.ledger).expect("ledger serializes");
                }
                json_line(out, rec).map_err(io)?;
            } else {
                writeln!(out, "volume {}", rep.volume).map_err(io)?;
                writeln!(out, "gamma {}", rep.gamma).map_err(io)?;
                writeln!(out, "phases {} step_size {}", rep.l, rep.step_size).map_err(io)?;
                if let Some(s) = rep.required_step_size {
                    writeln!(out, "required_step_size {s}").map_err(io)?;
                }
                writeln!(out, "fresh_points {} reused_fraction {:.4}", rep.fresh_points, rep.reused_fraction).map_err(io)?;
                writeln!(out, "walk {} reuse {}", rep.walk, rep.reuse).map_err(io)?;
                writeln!(out, "seed {}", rep.seed).map_err(io)?;
                writeln!(out, "elapsed_ms {:.3}", rep.elapsed.as_secs_f64() * 1e3).map_err(io)?;
                if let Some(o) = &oracle {
                    writeln!(out, "oracle {} se {} samples {}", o.volume, o.standard_error, o.samples).map_err(io)?;
                }
                if args.verbose {
                    writeln!(out, "phase\talpha\tfresh").map_err(io)?;
                    for k in (0..rep.l).rev() {
                        writeln!(out, "{k}\t{:.6}\t{}", rep.alphas[k], rep.ledger.fresh_per_phase[k]).map_err(io)?;
                    }
                }
            }
        }
        Command::Generate { spec, output } => {
            let text = emit_polytope(&spec.parse::<FamilySpec>()?.build()?);
            match output {
                Some(path) => std::fs::write(&path, text).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?,
                None => out.write_all(text.as_bytes()).map_err(io)?,
            }
        }
        Command::Trials(args) => {
            let p = args.input.load()?;
            let cfg = args.config.config();
            let stats = with_jobs(args.jobs, || run_trials(&p, &cfg, args.trials))?;
            if args.config.format == Format::JsonLines {
                json_line(out, serde_json::to_value(&stats).expect("stats serialize")).map_err(io)?;
            } else {
                writeln!(out, "trials\tmean\tstd_dev\tci_low\tci_high\tcoverage\tepsilon").map_err(io)?;
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}",
                    stats.trials, stats.mean, stats.std_dev, stats.ci_low, stats.ci_high, stats.coverage_count, stats.epsilon_observed
                )
                .map_err(io)?;
            }
        }
        Command::CheckSplit(args) => {
            let p = args.input.load()?;
            let cfg = args.config.config();
            let study = with_jobs(args.jobs, || split_study(&p, &cfg, args.checks, args.trials))?;
            if args.config.format == Format::JsonLines {
                for c in &study.checks {
                    json_line(out, serde_json::to_value(c).expect("check serializes")).map_err(io)?;
                }
                let mut summary = serde_json::to_value(&study).expect("study serializes");
                summary.as_object_mut().map(|o| o.remove("checks"));
                json_line(out, summary).map_err(io)?;
            } else {
                writeln!(out, "whole_mean\tci_low\tci_high\tpart1\tpart2\tsum\terror\tin_interval").map_err(io)?;
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{}/{}",
                    study.reference.mean,
                    study.reference.ci_low,
                    study.reference.ci_high,
                    study.mean_part1,
                    study.mean_part2,
                    study.mean_sum,
                    study.error,
                    study.in_interval,
                    study.checks.len()
                )
                .map_err(io)?;
            }
        }
        Command::BenchWalk { input, steps, seed, format } => {
            let p = input.load()?;
            let b = walk_benchmark(&p, steps, seed)?;
            if format == Format::JsonLines {
                json_line(
                    out,
                    serde_json::json!({
                        "steps": b.steps,
                        "coordinate_s": b.coordinate_time.as_secs_f64(),
                        "hypersphere_s": b.hypersphere_time.as_secs_f64(),
                        "ratio": b.ratio,
                    }),
                )
                .map_err(io)?;
            } else {
                writeln!(out, "steps\tcoordinate_s\thypersphere_s\tratio").map_err(io)?;
                let ratio = b.ratio.map_or_else(|| "-".to_string(), |r| format!("{r:.3}"));
                writeln!(
                    out,
                    "{}\t{:.3}\t{:.3}\t{}",
                    b.steps,
                    b.coordinate_time.as_secs_f64(),
                    b.hypersphere_time.as_secs_f64(),
                    ratio
                )
                .map_err(io)?;
            }
        }
        Command::StepSize { epsilon, sigma, l } => {
            let s = required_step_size(epsilon, sigma, l)?;
            writeln!(out, "{s}").map_err(io)?;
            writeln!(out, "per_phase_constant {:.3}", s as f64 / l as f64).map_err(io)?;
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            1
        }
    }
}
