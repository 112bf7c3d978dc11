//! The dual group: if `b·κ` normalises `H` then `b⁻¹·κ` normalises `H^⊥`.

use cpnorm::encode::{build_instance, code_to_group};
use cpnorm::gfp::{FpMatrix, PrimeField};
use cpnorm::search::{normalizer, Config};

fn main() -> cpnorm::Result<()> {
    let m = FpMatrix::from_rows(PrimeField::new(3)?, &[[1, 0, 0, 1, 2], [0, 1, 0, 1, 1], [0, 0, 1, 2, 1]])?;
    let h = code_to_group(&m)?;
    let inst = build_instance(&h, 3)?;
    let dual = inst.dual_instance()?;
    println!("code:\n{}dual:\n{}", inst.matrix(), dual.matrix());

    let n = normalizer(&h, 3, &Config::default())?;
    let nd = normalizer(&dual.group(), 3, &Config::default())?;
    println!("|N(H)| = {}, |N(H^perp)| = {}", n.order, nd.order);
    for x in &n.generators {
        let (b, kappa) = inst.decompose_bk(x)?;
        assert!(dual.normalises(&b.inverse().mul(&kappa)));
    }
    println!("every generator maps to a normalising element of the dual");
    Ok(())
}
