//! Seeded instance generation, a run record and its round trip.

use cpnorm::cli::{compute, generate, ComputeOptions, Family, RunRecord};

fn main() -> cpnorm::Result<()> {
    let g = generate(Family::Cp, 3, 6, 3, 2024)?;
    let text = g.to_text();
    print!("{text}");
    assert_eq!(generate(Family::Cp, 3, 6, 3, 2024)?.to_text(), text);

    let rec = compute(&text, &ComputeOptions::default())?;
    let lines = rec.to_lines();
    print!("{lines}");
    let back = RunRecord::from_lines(&lines)?;
    assert_eq!(back, rec);
    assert!(back.verify(&g.group)?);
    println!("record re-parses and its generators normalise the input");
    Ok(())
}
