// Time both walkers over the same number of steps.
//
//     cargo run --release --example walk_benchmark -- 10000000

use polyvol::generators::gen_rh;
use polyvol::verification::walk_benchmark;

pub fn run_example() -> polyvol::Result<()> {
    run(100_000)
}

fn run(steps: u64) -> polyvol::Result<()> {
    println!("n   m   coordinate(s)  hypersphere(s)  ratio");
    for n in [10, 20] {
        let p = gen_rh(n, 2 * n, 1)?.polytope;
        let b = walk_benchmark(&p, steps, 1)?;
        println!(
            "{n:<3} {:<3} {:>13.3}  {:>14.3}  {:.2}",
            2 * n,
            b.coordinate_time.as_secs_f64(),
            b.hypersphere_time.as_secs_f64(),
            b.ratio.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

fn main() -> polyvol::Result<()> {
    let steps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10_000_000);
    run(steps)
}
