//! Node counts with each pruning rule switched off in turn.

use cpnorm::cli::{generate, Family};
use cpnorm::search::{normalizer, Config, PruneRule, PruneToggles};

fn main() -> cpnorm::Result<()> {
    let g = generate(Family::Cp, 3, 10, 4, 11)?;
    let base = normalizer(&g.group, 3, &Config::default())?;
    println!("all rules: |N| = {}, {} nodes", base.order, base.stats.nodes);
    println!("removed values: {:?}", base.stats.pruned);
    for r in PruneRule::ALL {
        let c = Config::default().with_prune(PruneToggles::default().without(r));
        let n = normalizer(&g.group, 3, &c)?;
        assert_eq!(n.order, base.order);
        println!("without {:<10} {:>8} nodes {:>6} ms", r.name(), n.stats.nodes, n.stats.elapsed_ms);
    }
    let off = normalizer(&g.group, 3, &Config::default().with_prune(PruneToggles::none()))?;
    println!("no rules:          {:>8} nodes {:>6} ms", off.stats.nodes, off.stats.elapsed_ms);
    Ok(())
}
