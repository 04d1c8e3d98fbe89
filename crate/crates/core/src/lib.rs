//! Volume estimation for convex polytopes given as `{x : Ax ≤ b}`.
//!
//! The pipeline has three stages:
//!
//! 1. [`rounding`] puts the polytope in near-isotropic position with a
//!    shallow-cut ellipsoid method, so that `B(0,1) ⊆ P ⊆ B(0,r)`.
//! 2. [`estimator`] slices `P` with concentric balls of radius `2^{i/n}` and
//!    estimates each consecutive volume ratio, outermost first, reusing the
//!    walk points that fall into inner bodies.
//! 3. [`sampling`] supplies the points with coordinate-direction (default) or
//!    hypersphere-direction hit-and-run.
//!
//! ```no_run
//! use polyvol::{estimate_volume, generators, EstimationConfig};
//!
//! let cube = generators::gen_cube(10)?;
//! let report = estimate_volume(&cube, &EstimationConfig::default())?;
//! println!("{} (exact 1024)", report.volume);
//! # Ok::<(), polyvol::Error>(())
//! ```
//!
//! [`generators`] builds the usual benchmark families, and [`verification`]
//! holds a rejection-sampling oracle and repeated-trial tooling.

pub mod cli;
pub mod error;
pub mod estimator;
pub mod format;
pub mod generators;
pub mod linalg;
pub mod lp;
pub mod polytope;
pub mod rng;
pub mod rounding;
pub mod sampling;
pub mod verification;

pub use error::{Error, Result};
pub use estimator::{estimate_volume, EstimateReport, EstimationConfig};
pub use format::{emit_polytope, parse_polytope, read_polytope};
pub use lp::LpOutcome;
pub use polytope::Polytope;
pub use rounding::{round_polytope, RoundedPolytope};
pub use sampling::WalkKind;
