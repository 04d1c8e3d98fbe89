//! Rounding, shear and generator outputs checked against the rejection oracle.

use polyvol::generators::{apply_shear, gen_cube, gen_cuboid_sheared, gen_ran, gen_rh, scale_axis};
use polyvol::rounding::round_polytope;
use polyvol::verification::{oracle_volume, run_trials};
use polyvol::{EstimationConfig, Polytope};

const SAMPLES: u64 = 4_000_000;

fn z(a: f64, sa: f64, b: f64, sb: f64) -> f64 {
    let se = (sa * sa + sb * sb).sqrt();
    if se > 0.0 {
        (a - b).abs() / se
    } else if (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) {
        0.0
    } else {
        f64::INFINITY
    }
}

fn gamma_consistent(p: &Polytope, beta: f64, seed: u64) {
    let r = round_polytope(p, beta).unwrap();
    let before = oracle_volume(p, SAMPLES, seed).unwrap();
    let after = oracle_volume(&r.polytope, SAMPLES, seed + 1).unwrap();
    let score = z(
        before.volume,
        before.standard_error,
        r.gamma * after.volume,
        r.gamma * after.standard_error,
    );
    assert!(score <= 3.0, "γ-consistency z = {score}");
}

#[test]
fn square_with_quarter_beta() {
    let p = gen_cube(2).unwrap();
    let r = round_polytope(&p, 0.25).unwrap();
    let after = oracle_volume(&r.polytope, SAMPLES, 3).unwrap();
    assert!(z(r.gamma * after.volume, r.gamma * after.standard_error, 4.0, 0.0) <= 3.0);
}

#[test]
fn gamma_consistency_small_instances() {
    gamma_consistent(&scale_axis(&gen_cube(2).unwrap(), 0, 50.0).unwrap(), 0.25, 10);
    gamma_consistent(&gen_cube(3).unwrap(), 1.0 / 6.0, 12);
    for seed in 0..3 {
        gamma_consistent(&gen_rh(4, 12, seed).unwrap().polytope, 1.0 / 8.0, 20 + 2 * seed);
    }
}

#[test]
fn shear_preserves_volume() {
    let once = apply_shear(&gen_cube(2).unwrap(), 1, 5).unwrap();
    let o = oracle_volume(&once, SAMPLES, 6).unwrap();
    assert!((o.volume - 4.0).abs() <= 3.0 * o.standard_error, "{o:?}");
    for seed in 0..3 {
        let p = gen_rh(3, 8, seed).unwrap().polytope;
        let q = apply_shear(&p, 2, seed + 100).unwrap();
        let (a, b) = (oracle_volume(&p, SAMPLES, 7).unwrap(), oracle_volume(&q, SAMPLES, 8).unwrap());
        assert!(z(a.volume, a.standard_error, b.volume, b.standard_error) <= 3.0);
    }
}

#[test]
fn sheared_cuboid_in_the_plane() {
    let o = oracle_volume(&gen_cuboid_sheared(2, 4).unwrap(), SAMPLES, 9).unwrap();
    assert!((o.volume - 400.0).abs() <= 3.0 * o.standard_error, "{o:?}");
}

#[test]
fn random_integer_polytope_matches_estimator() {
    let p = gen_ran(3, 8, 2).unwrap().polytope;
    let o = oracle_volume(&p, 10_000_000, 11).unwrap();
    let s = run_trials(&p, &EstimationConfig::default(), 20).unwrap();
    assert!(z(s.mean, s.standard_error(), o.volume, o.standard_error) <= 3.0);
}

#[test]
fn ball_ratios_lie_between_one_and_two() {
    use polyvol::estimator::BallShells;
    use polyvol::linalg::norm_sq;
    use polyvol::rng::stream;
    use rand::Rng;

    let cfg = EstimationConfig::default();
    for seed in 0..2 {
        let p = gen_rh(3, 9, seed).unwrap().polytope;
        let r = round_polytope(&p, 1.0 / cfg.sandwich_ratio(3)).unwrap();
        let l = cfg.phases(3);
        let shells = BallShells::new(3, l);
        let mut rng = stream(seed);
        for i in (0..l).step_by(3) {
            let outer = shells.radius(i + 1);
            let (mut hits_outer, mut hits_inner) = (0u64, 0u64);
            for _ in 0..200_000 {
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-outer..outer)).collect();
                if r.polytope.contains(&x).unwrap() && norm_sq(&x) <= outer * outer {
                    hits_outer += 1;
                    if shells.index(norm_sq(&x)) <= i {
                        hits_inner += 1;
                    }
                }
            }
            let ratio = hits_outer as f64 / hits_inner as f64;
            // Delta-method error of a ratio of nested counts.
            let q = hits_inner as f64 / hits_outer as f64;
            let se = ratio * ((1.0 - q) / hits_inner as f64).sqrt();
            assert!(ratio >= 1.0 - 3.0 * se && ratio <= 2.0 + 3.0 * se, "phase {i}: {ratio} ± {se}");
        }
    }
}
