// Cut a random polytope by random hyperplanes and compare the part volumes
// with the whole.

use polyvol::generators::gen_rh;
use polyvol::verification::split_study;
use polyvol::EstimationConfig;

pub fn run_example() -> polyvol::Result<()> {
    let p = gen_rh(5, 14, 3)?.polytope;
    let study = split_study(&p, &EstimationConfig::default(), 5, 20)?;
    let r = &study.reference;
    println!("whole  {:.4}  95% interval [{:.4}, {:.4}]", r.mean, r.ci_low, r.ci_high);
    for c in &study.checks {
        println!(
            "  {:.4} + {:.4} = {:.4}  {}",
            c.part1,
            c.part2,
            c.sum,
            if c.in_interval { "inside" } else { "outside" }
        );
    }
    println!("error of the means {:.3}%", 100.0 * study.error);
    Ok(())
}

fn main() -> polyvol::Result<()> {
    run_example()
}
