//! `N_B(H)`: the orbit-fixing part of the normaliser.

use crate::encode::InPInstance;
use crate::gfp::FpMatrix;
use crate::perm::{PermGroup, Permutation};

/// Column sets of the connected components of the graph joining row `i` to
/// column `j` whenever `M_{i,j} ≠ 0`. These are the orbit supports of the
/// finest direct decomposition of `H`.
pub fn direct_components(m: &FpMatrix) -> Vec<Vec<usize>> {
    let (s, k) = (m.rows(), m.cols());
    let mut comp = vec![usize::MAX; k];
    let mut out = Vec::new();
    for start in 0..k {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut cols = vec![start];
        comp[start] = id;
        let mut row_seen = vec![false; s];
        let mut i = 0;
        while i < cols.len() {
            let j = cols[i];
            i += 1;
            for r in 0..s {
                if m.get(r, j) == 0 || row_seen[r] {
                    continue;
                }
                row_seen[r] = true;
                for c in (0..k).filter(|&c| m.get(r, c) != 0) {
                    if comp[c] == usize::MAX {
                        comp[c] = id;
                        cols.push(c);
                    }
                }
            }
        }
        cols.sort_unstable();
        out.push(cols);
    }
    out
}

/// Generators of `N_B(H)`: the `g_i` together with, for each direct
/// component, the element raising every `g_j` in it to the power `t`.
pub fn norm_bh_generators(inst: &InPInstance) -> Vec<Permutation> {
    let t = inst.field().primitive();
    let mut gens: Vec<Permutation> = (0..inst.k()).map(|i| inst.orbit_generator(i).clone()).collect();
    if t != 1 {
        for comp in direct_components(inst.matrix()) {
            let mut d = vec![1; inst.k()];
            comp.iter().for_each(|&j| d[j] = t);
            gens.push(inst.scaling_element(&d).expect("t is a unit"));
        }
    }
    gens
}

pub fn norm_bh(inst: &InPInstance) -> PermGroup {
    PermGroup::new(inst.n(), norm_bh_generators(inst)).expect("degrees agree")
}
