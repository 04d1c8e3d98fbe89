use polyvol::generators::{gen_cube, gen_rh};
use polyvol::linalg::norm_sq;
use polyvol::rng::{derive_seed, stream};
use polyvol::sampling::{chord_coordinate, chord_direction, WalkKind, Walker};
use polyvol::verification::ks_two_sample;
use polyvol::Polytope;
use rand::Rng;
use rand_distr::StandardNormal;

fn bisect_exit(p: &Polytope, radius: f64, x: &[f64], u: &[f64]) -> f64 {
    let inside = |t: f64| {
        let y: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + t * b).collect();
        p.contains(&y).unwrap() && norm_sq(&y) <= radius * radius
    };
    let (mut lo, mut hi) = (0.0, 2.0 * radius + norm_sq(x).sqrt() + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[test]
fn thousand_chords_match_bisection() {
    let mut rng = stream(31);
    for k in 0..1000u64 {
        let p = gen_rh(4, 12, k % 50).unwrap().polytope;
        let radius = rng.random_range(1.0..3.0);
        // rh instances contain the unit ball, so this point is interior.
        let g: Vec<f64> = (0..4).map(|_| rng.sample(StandardNormal)).collect();
        let s = rng.random_range(0.0..0.9) / norm_sq(&g).sqrt();
        let x: Vec<f64> = g.iter().map(|v| v * s).collect();
        let u: Vec<f64> = if k % 2 == 0 {
            let mut e = vec![0.0; 4];
            e[rng.random_range(0..4)] = 1.0;
            e
        } else {
            let h: Vec<f64> = (0..4).map(|_| rng.sample(StandardNormal)).collect();
            let len = norm_sq(&h).sqrt();
            h.iter().map(|v| v / len).collect()
        };
        let c = match u.iter().position(|&v| v == 1.0) {
            Some(d) if k % 2 == 0 => chord_coordinate(&p, radius, &x, d).unwrap(),
            _ => chord_direction(&p, radius, &x, &u).unwrap(),
        };
        let neg: Vec<f64> = u.iter().map(|v| -v).collect();
        assert!((c.t_max - bisect_exit(&p, radius, &x, &u)).abs() <= 1e-9, "triple {k}");
        assert!((-c.t_min - bisect_exit(&p, radius, &x, &neg)).abs() <= 1e-9, "triple {k}");
    }
}

/// x₁ after `50 n` steps from the origin, over many independent chains.
fn marginals(kind: WalkKind, chains: usize) -> Vec<f64> {
    let p = gen_cube(2).unwrap();
    (0..chains)
        .map(|c| {
            let mut w = Walker::new(&p, 10.0, vec![0.0, 0.0], stream(derive_seed(17, c as u64))).unwrap();
            for _ in 0..100 {
                w.step(kind).unwrap();
            }
            w.point()[0]
        })
        .collect()
}

#[test]
fn walk_marginals_are_uniform() {
    let mut rng = stream(4);
    let reference: Vec<f64> = (0..10_000).map(|_| rng.random_range(-1.0..1.0)).collect();
    for kind in [WalkKind::Coordinate, WalkKind::Hypersphere] {
        let (d, p) = ks_two_sample(&marginals(kind, 10_000), &reference);
        assert!(p > 0.01, "{kind}: D = {d}, p = {p}");
    }
}

#[test]
fn closure_over_a_million_steps() {
    let p = gen_rh(6, 15, 2).unwrap().polytope;
    for kind in [WalkKind::Coordinate, WalkKind::Hypersphere] {
        let mut w = Walker::new(&p, 1.8, vec![0.0; 6], stream(8)).unwrap();
        for _ in 0..1_000_000 {
            w.step(kind).unwrap();
            assert!(p.contains(w.point()).unwrap() && norm_sq(w.point()) <= 1.8 * 1.8);
        }
    }
}

#[test]
fn coordinate_step_changes_one_coordinate() {
    let p = gen_rh(5, 12, 1).unwrap().polytope;
    let mut w = Walker::new(&p, 2.0, vec![0.0; 5], stream(3)).unwrap();
    for _ in 0..100 {
        w.step_coordinate().unwrap();
    }
    for _ in 0..10_000 {
        let before = w.point().to_vec();
        w.step_coordinate().unwrap();
        let changed = before.iter().zip(w.point()).filter(|(a, b)| a != b).count();
        assert!(changed <= 1);
    }
}

#[test]
fn one_dimensional_walk_is_uniform() {
    let p = gen_cube(1).unwrap();
    let mut sum = 0.0;
    for c in 0..100_000u64 {
        let mut w = Walker::new(&p, 5.0, vec![0.0], stream(derive_seed(2, c))).unwrap();
        w.step(WalkKind::Coordinate).unwrap();
        sum += w.point()[0];
    }
    assert!((sum / 100_000.0).abs() <= 0.02);
}
