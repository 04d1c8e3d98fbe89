// Estimate the volume of a generated instance or an instance file.
//
//     cargo run --release --example estimate -- cube:10
//     cargo run --release --example estimate -- path/to/instance.poly

use polyvol::generators::FamilySpec;
use polyvol::{estimate_volume, read_polytope, EstimationConfig, Polytope};

fn load(arg: &str) -> polyvol::Result<Polytope> {
    match arg.parse::<FamilySpec>() {
        Ok(spec) => spec.build(),
        Err(_) => read_polytope(arg),
    }
}

pub fn run_example() -> polyvol::Result<()> {
    run("cross:4")
}

fn run(arg: &str) -> polyvol::Result<()> {
    let p = load(arg)?;
    let report = estimate_volume(&p, &EstimationConfig::default())?;
    println!("{arg}: n = {}, m = {}", p.dim(), p.num_constraints());
    println!("volume      {:.6}", report.volume);
    println!("gamma       {:.6e}", report.gamma);
    println!("phases      {} x {} points", report.l, report.step_size);
    println!("fresh       {} ({:.1}%)", report.fresh_points, 100.0 * report.fresh_fraction());
    println!("elapsed     {:.1} ms", report.elapsed.as_secs_f64() * 1e3);
    Ok(())
}

fn main() -> polyvol::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "cube:10".into());
    run(&arg)
}
