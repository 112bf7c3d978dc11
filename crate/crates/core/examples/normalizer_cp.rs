//! Normaliser in S_6 of the group generated by (1 2)(5 6) and (3 4)(5 6).
//!
//! `cargo run --example normalizer_cp`

use cpnorm::encode::parse_group_text;
use cpnorm::search::{normalizer, Config};

fn main() -> cpnorm::Result<()> {
    let (p, h) = parse_group_text("2 6\n(1 2)(5 6)\n(3 4)(5 6)\n")?;
    let n = normalizer(&h, p, &Config::default())?;
    println!("|H| = {}", h.order());
    println!("|N(H)| = {}", n.order);
    for g in &n.generators {
        println!("  {g}");
    }
    println!("search nodes: {}, leaves: {}", n.stats.nodes, n.stats.leaves);
    Ok(())
}
