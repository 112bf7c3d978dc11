//! The monomial automorphism group of a code read off the normaliser of the
//! matching permutation group: |N| = p^k |MAut|.

use cpnorm::encode::{build_instance, code_to_group};
use cpnorm::gfp::{FpMatrix, PrimeField};
use cpnorm::oracle::{brute_maut, DEFAULT_BUDGET};
use cpnorm::search::{normalizer, Config};
use num_bigint::BigUint;

fn main() -> cpnorm::Result<()> {
    // the ternary repetition code
    let m = FpMatrix::from_rows(PrimeField::new(3)?, &[[1, 1, 1]])?;
    let h = code_to_group(&m)?;
    let inst = build_instance(&h, 3)?;
    let n = normalizer(&h, 3, &Config::default())?;
    let maut = &n.order / BigUint::from(3u32).pow(inst.k() as u32);
    println!("code:\n{m}");
    println!("|N| = {}, so |MAut| = {maut}", n.order);

    println!("monomial images of the generators:");
    for g in &n.generators {
        let w = inst.xi_image(g)?;
        if !w.is_identity() {
            println!("  {w}");
        }
    }
    let brute = brute_maut(inst.matrix(), DEFAULT_BUDGET)?;
    println!("enumeration of W finds {} automorphisms", brute.len());
    Ok(())
}
