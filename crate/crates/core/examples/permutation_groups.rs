//! Stabiliser chains, orders and membership.

use cpnorm::perm::{conjugacy_witness, PermGroup, Permutation};

fn main() -> cpnorm::Result<()> {
    let n = 8;
    let gens = ["(1 2 3 4 5 6 7 8)", "(1 8)(2 7)(3 6)(4 5)"].map(|c| Permutation::parse(c, n).unwrap());
    let d16 = PermGroup::new(n, gens)?;
    let chain = d16.stab_chain();
    println!("|D_16| = {}, base {:?}", chain.order(), chain.base());
    println!("orbit of 3 under the stabiliser of 1: {:?}", chain.orbit_of_point(2, 1));
    let x = Permutation::parse("(2 8)(3 7)(4 6)", n)?;
    println!("{x} in group: {}", chain.contains(&x));

    let s8 = PermGroup::symmetric(n);
    println!("|S_8| = {}", s8.order());
    let a = Permutation::parse("(1 2 3)(4 5)", n)?;
    let b = Permutation::parse("(6 7)(2 4 8)", n)?;
    let all: Vec<usize> = (0..n).collect();
    if let Some(s) = conjugacy_witness(&a, &b, &all)? {
        println!("{a} conjugated by {s} is {}", a.conj(&s));
    }
    Ok(())
}
