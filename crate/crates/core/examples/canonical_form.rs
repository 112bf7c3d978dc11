//! Canonical representatives under row operations and column scaling.

use cpnorm::canon::{apply_f, canonical_rep};
use cpnorm::gfp::{FpMatrix, PrimeField};
use cpnorm::oracle::{brute_canon_rep, DEFAULT_BUDGET};

fn main() -> cpnorm::Result<()> {
    let f = PrimeField::new(5)?;
    let a = FpMatrix::from_rows(f, &[[1, 0, 3, 2, 4], [0, 1, 1, 4, 0]])?;
    let c = canonical_rep(&a)?;
    println!("A:\n{a}");
    println!("canonical:\n{}", c.rep);
    println!("column scalars d = {:?}", c.d);

    let r = FpMatrix::from_rows(f, &[[2, 1], [3, 3]])?;
    let moved = apply_f(&a, &r, &[4, 1, 2, 3, 2])?;
    println!("moved by (R, d):\n{moved}");
    assert_eq!(canonical_rep(&moved)?.rep, c.rep);
    println!("same canonical form after the move");

    let small = FpMatrix::from_rows(PrimeField::new(3)?, &[[1, 0, 2, 1], [0, 1, 1, 1]])?;
    assert_eq!(canonical_rep(&small)?.rep, brute_canon_rep(&small, DEFAULT_BUDGET)?);
    println!("least in its orbit (checked by enumeration):\n{}", canonical_rep(&small)?.rep);
    Ok(())
}
