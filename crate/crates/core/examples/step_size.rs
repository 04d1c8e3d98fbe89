// Points per phase needed for a target interval width.

use polyvol::estimator::required_step_size;

pub fn run_example() -> polyvol::Result<()> {
    println!("epsilon  l    step_size  per phase");
    for epsilon in [0.1, 0.2, 0.3] {
        for l in [20, 44, 88] {
            let s = required_step_size(epsilon, 1.96, l)?;
            println!("{epsilon:<8} {l:<4} {s:<10} {:.1}", s as f64 / l as f64);
        }
    }
    Ok(())
}

fn main() -> polyvol::Result<()> {
    run_example()
}
