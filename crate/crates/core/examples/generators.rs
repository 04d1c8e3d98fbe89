// Build the standard instance families and print one in the text format.

use polyvol::generators::FamilySpec;
use polyvol::emit_polytope;

pub fn run_example() -> polyvol::Result<()> {
    for spec in ["cube:3", "cross:3", "cuboid:3:seed=2", "rh:3:8:seed=5", "ran:3:8:seed=5", "cube:4:shear=3"] {
        let s: FamilySpec = spec.parse()?;
        let p = s.build()?;
        let exact = s.exact_volume().map_or("unknown".to_string(), |v| format!("{v}"));
        println!("{spec:<18} n = {}, m = {:>2}, exact volume {exact}", p.dim(), p.num_constraints());
    }
    print!("{}", emit_polytope(&"rh:2:5:seed=1".parse::<FamilySpec>()?.build()?));
    Ok(())
}

fn main() -> polyvol::Result<()> {
    run_example()
}
