// How many walk points reuse saves, measured against the expected count.

use polyvol::estimator::expected_reuse_savings;
use polyvol::generators::gen_cube;
use polyvol::{estimate_volume, EstimationConfig};

pub fn run_example() -> polyvol::Result<()> {
    let p = gen_cube(6)?;
    let with = estimate_volume(&p, &EstimationConfig::default())?;
    let without = estimate_volume(
        &p,
        &EstimationConfig {
            reuse: false,
            ..Default::default()
        },
    )?;
    let total = with.step_size * with.l;
    println!("baseline points     {total}");
    println!("fresh with reuse    {} ({:.1}%)", with.fresh_points, 100.0 * with.fresh_fraction());
    println!("fresh without       {}", without.fresh_points);
    println!(
        "expected savings    {} (measured {})",
        expected_reuse_savings(&with.alphas, with.step_size),
        total as u64 - with.fresh_points
    );
    println!("volumes             {:.3} / {:.3} (exact 64)", with.volume, without.volume);
    Ok(())
}

fn main() -> polyvol::Result<()> {
    run_example()
}
