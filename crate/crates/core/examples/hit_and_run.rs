// Run both hit-and-run walkers in the square and compare their x₁ marginals
// with directly drawn uniform points.

use polyvol::generators::gen_cube;
use polyvol::rng::{derive_seed, stream};
use polyvol::sampling::{WalkKind, Walker};
use polyvol::verification::ks_two_sample;
use rand::Rng;

pub fn run_example() -> polyvol::Result<()> {
    let square = gen_cube(2)?;
    let chains = 2_000;
    let mut rng = stream(1);
    let direct: Vec<f64> = (0..chains).map(|_| rng.random_range(-1.0..1.0)).collect();
    for kind in [WalkKind::Coordinate, WalkKind::Hypersphere] {
        let mut ends = Vec::with_capacity(chains);
        for c in 0..chains {
            let mut w = Walker::new(&square, 10.0, vec![0.0, 0.0], stream(derive_seed(7, c as u64)))?;
            for _ in 0..100 {
                w.step(kind)?;
            }
            ends.push(w.point()[0]);
        }
        let (d, p) = ks_two_sample(&ends, &direct);
        println!("{kind:<12} KS D = {d:.4}, p = {p:.3}");
    }
    Ok(())
}

fn main() -> polyvol::Result<()> {
    run_example()
}
