//! Median and quartile times over a family of random instances.
//!
//! `cargo run --release --example benchmark -- cp:3:6,8,10 5`

use std::time::Duration;

use cpnorm::cli::{bench, BenchRow, BenchSpec, MethodArg};
use cpnorm::search::Config;

fn main() -> cpnorm::Result<()> {
    let mut args = std::env::args().skip(1);
    let spec: BenchSpec = args.next().unwrap_or_else(|| "cp:3:6,8,10".into()).parse()?;
    let trials = args.next().and_then(|t| t.parse().ok()).unwrap_or(5);
    let rows = bench(
        &spec,
        &[MethodArg::Full, MethodArg::LimitDepth],
        trials,
        Duration::from_secs(60),
        0,
        &Config::default(),
        |_| {},
    )?;
    println!("{}", BenchRow::header());
    for r in rows {
        println!("{}", r.to_line());
    }
    Ok(())
}
