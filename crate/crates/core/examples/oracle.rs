// Estimator against brute-force rejection sampling on low-dimensional instances.

use polyvol::generators::FamilySpec;
use polyvol::verification::{oracle_volume, run_trials};
use polyvol::EstimationConfig;

pub fn run_example() -> polyvol::Result<()> {
    println!("instance          estimator (20 trials)       oracle (10^6 samples)");
    for spec in ["cube:3", "cross:3", "rh:4:12:seed=1", "ran:3:8:seed=2"] {
        let p = spec.parse::<FamilySpec>()?.build()?;
        let s = run_trials(&p, &EstimationConfig::default(), 20)?;
        let o = oracle_volume(&p, 1_000_000, 5)?;
        println!(
            "{spec:<16}  {:>10.4} ± {:<10.4}  {:>10.4} ± {:.4}",
            s.mean,
            s.standard_error(),
            o.volume,
            o.standard_error
        );
    }
    Ok(())
}

fn main() -> polyvol::Result<()> {
    run_example()
}
