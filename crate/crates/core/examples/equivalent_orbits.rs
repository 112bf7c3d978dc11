//! Orbits on which `H` acts identically (up to a power) collapse to one
//! representative; the normaliser is rebuilt from the reduced search and the
//! centraliser.

use cpnorm::encode::{build_instance, parse_group_text, reduce_equivalent_orbits};
use cpnorm::search::{full_search, normalizer, Config};

fn main() -> cpnorm::Result<()> {
    // orbits 1 and 2 are equivalent, as are 3 and 4
    let (p, h) = parse_group_text("3 12\n(1 2 3)(4 6 5)(7 8 9)\n(7 8 9)(10 11 12)\n")?;
    let inst = build_instance(&h, p)?;
    println!("classes (label, scalar): {:?}", inst.equivalence_classes());
    let red = reduce_equivalent_orbits(&inst)?;
    println!("reduced group on {} points, colours {:?}", red.h1.degree(), red.colours);
    println!("|C(H)| = {}", red.centralizer.order());

    let n = normalizer(&h, p, &Config::default())?;
    let direct = full_search(&inst, &Config::default())?;
    println!("|N(H)| = {} via reduction, {} by direct search", n.order, direct.order);
    Ok(())
}
