//! Full search against the pivot-scalar enumeration on the same instances.
//!
//! `cargo run --release --example limit_depth_vs_full -- 7 20 6`

use std::time::Instant;

use cpnorm::cli::{generate, Family};
use cpnorm::search::{normalizer, Config, Method};

fn main() -> cpnorm::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, k, dim) = match args[..] {
        [p, k, d] => (p as u32, k, d),
        _ => (5, 16, 6),
    };
    println!("p={p} k={k} dim={dim}");
    for seed in 0..5 {
        let g = generate(Family::Cp, p, k, dim, seed)?;
        let mut line = format!("seed {seed}:");
        let mut orders = Vec::new();
        for method in [Method::Full, Method::LimitDepth] {
            let t = Instant::now();
            let n = normalizer(&g.group, p, &Config::default().with_method(method))?;
            line += &format!(" {method} {:.3}s", t.elapsed().as_secs_f64());
            orders.push(n.order);
        }
        assert_eq!(orders[0], orders[1]);
        println!("{line}  |N| = {}", orders[0]);
    }
    Ok(())
}
