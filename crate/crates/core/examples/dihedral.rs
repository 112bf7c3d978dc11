//! A subdirect product of three copies of D_10 and its normaliser.

use cpnorm::dihedral::{build_dihedral, dihedral_group, normalizer_dihedral};
use cpnorm::gfp::{FpMatrix, PrimeField};
use cpnorm::search::Config;

fn main() -> cpnorm::Result<()> {
    let rotations = FpMatrix::from_rows(PrimeField::new(5)?, &[[1, 2, 0], [0, 1, 1]])?;
    let reflections = FpMatrix::from_rows(PrimeField::new(2)?, &[[1, 1, 0], [0, 1, 1]])?;
    let h = dihedral_group(&rotations, &reflections)?;
    println!("|H| = {} on {} points", h.order(), h.degree());

    let inst = build_dihedral(&h, 5)?;
    println!("|H_p| = {}, |H_2| = {}", inst.sylow_p().group().order(), inst.sylow_2().order());
    let alphas: Vec<usize> = inst.alphas().iter().map(|a| a + 1).collect();
    println!("centres fixed by H_2: {alphas:?}");
    println!("H_2 on Gamma: {:?}", inst.h2_on_gamma().generators());

    let n = normalizer_dihedral(&inst, &Config::default())?;
    println!("|N(H)| = {}", n.order);
    for g in &n.generators {
        println!("  {g}");
    }
    Ok(())
}
