// Round a long, sheared box and inspect the sandwich it produces.

use polyvol::generators::gen_cuboid_sheared;
use polyvol::rounding::ShallowCut;

pub fn run_example() -> polyvol::Result<()> {
    let p = gen_cuboid_sheared(6, 11)?;
    let beta = 1.0 / 12.0;
    let mut cut = ShallowCut::new(&p, beta)?;
    while let Some(row) = cut.step()? {
        if cut.iterations() % 250 == 0 {
            println!("iteration {:>4}: cut along row {row}", cut.iterations());
        }
    }
    let r = cut.finish()?;
    println!("{} iterations", r.iterations);
    println!("inscribed radius of P''   {:.4} (at least 1)", r.inscribed_radius());
    println!("gamma = det(L) beta^n     {:.6e}", r.gamma);
    // The ellipsoid center maps back from the origin of P''.
    let back = r.to_original(&vec![0.0; 6]);
    println!("center                    {back:.3?}");
    assert!(p.contains(&back)?);
    Ok(())
}

fn main() -> polyvol::Result<()> {
    run_example()
}
