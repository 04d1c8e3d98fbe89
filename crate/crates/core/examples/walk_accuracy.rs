// Spread of repeated estimates under each walker, on instances with known volume.
//
//     cargo run --release --example walk_accuracy -- 100

use polyvol::generators::FamilySpec;
use polyvol::verification::{accuracy_comparison, accuracy_table, KnownInstance};
use polyvol::EstimationConfig;

pub fn run_example() -> polyvol::Result<()> {
    run(&["cube:4", "cross:4"], 10)
}

fn run(specs: &[&str], trials: usize) -> polyvol::Result<()> {
    let instances = specs
        .iter()
        .map(|s| {
            let spec: FamilySpec = s.parse()?;
            Ok(KnownInstance {
                name: s.to_string(),
                polytope: spec.build()?,
                exact: spec.exact_volume().expect("closed-form family"),
            })
        })
        .collect::<polyvol::Result<Vec<_>>>()?;
    let rows = accuracy_comparison(&instances, &EstimationConfig::default(), trials)?;
    println!("left = coordinate walk, right = hypersphere walk");
    print!("{}", accuracy_table(&rows));
    Ok(())
}

fn main() -> polyvol::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100);
    run(&["cube:10", "cube:14", "cross:7"], trials)
}
