//! Cross-checks the search against brute-force enumeration of S_n on small
//! random instances.

use cpnorm::cli::{generate, Family};
use cpnorm::oracle::{brute_normalizer, expected_normalizer_order, DEFAULT_BUDGET};
use cpnorm::search::{normalizer, Config};

fn main() -> cpnorm::Result<()> {
    for (p, k, dim) in [(2, 3, 1), (2, 4, 2), (3, 2, 1), (3, 3, 2), (2, 4, 3)] {
        for seed in 0..3 {
            let g = generate(Family::Cp, p, k, dim, seed)?;
            let n = normalizer(&g.group, p, &Config::default())?;
            let brute = brute_normalizer(&g.group, DEFAULT_BUDGET)?;
            let by_codes = expected_normalizer_order(&g.matrix, DEFAULT_BUDGET)?;
            let ok = n.order == brute.order() && n.order == by_codes;
            println!(
                "p={p} k={k} dim={dim} seed={seed}: search {} brute {} p^k|MAut| {} {}",
                n.order,
                brute.order(),
                by_codes,
                if ok { "ok" } else { "MISMATCH" }
            );
            assert!(ok);
        }
    }
    Ok(())
}
