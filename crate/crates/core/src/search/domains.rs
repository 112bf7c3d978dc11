//! Candidate images per orbit, their initialisation from code invariants,
//! and the all-different refiner.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::encode::{classes_with_scalars, stab_matrix, InPInstance};
use crate::gfp::{column_classes, min_weight_vectors, FpMatrix, Partition};
use crate::perm::{PermGroup, Permutation};

use super::PruneToggles;

/// `doms[i]`: the orbits `Ω_i` may still be mapped to.
#[derive(Clone, PartialEq, Eq)]
pub struct Domains {
    doms: Vec<FixedBitSet>,
}

impl Domains {
    pub fn full(k: usize) -> Self {
        let mut all = FixedBitSet::with_capacity(k);
        all.insert_range(..);
        Self { doms: vec![all; k] }
    }

    pub fn from_sets(k: usize, sets: &[Vec<usize>]) -> Self {
        let doms = sets
            .iter()
            .map(|s| {
                let mut b = FixedBitSet::with_capacity(k);
                s.iter().for_each(|&x| b.insert(x));
                b
            })
            .collect();
        Self { doms }
    }

    pub fn len(&self) -> usize {
        self.doms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doms.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.doms[i].contains(j)
    }

    pub fn values(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.doms[i].ones()
    }

    pub fn to_vec(&self, i: usize) -> Vec<usize> {
        self.doms[i].ones().collect()
    }

    pub fn size(&self, i: usize) -> usize {
        self.doms[i].count_ones(..)
    }

    /// True if some domain is empty.
    pub fn is_dead(&self) -> bool {
        self.doms.iter().any(|d| d.is_clear())
    }

    /// Keeps only values satisfying `keep`; returns how many were removed.
    pub fn retain(&mut self, i: usize, mut keep: impl FnMut(usize) -> bool) -> usize {
        let drop: Vec<usize> = self.doms[i].ones().filter(|&j| !keep(j)).collect();
        for &j in &drop {
            self.doms[i].set(j, false);
        }
        drop.len()
    }

    /// Records the assignment `i ↦ v` and removes `v` from every other domain.
    pub fn assign(&mut self, i: usize, v: usize) {
        self.doms[i].clear();
        self.doms[i].insert(v);
        for (j, d) in self.doms.iter_mut().enumerate() {
            if j != i {
                d.set(v, false);
            }
        }
    }

    pub fn intersect_with(&mut self, i: usize, allowed: &[usize]) {
        let mut b = FixedBitSet::with_capacity(self.doms[i].len());
        allowed.iter().for_each(|&x| b.insert(x));
        self.doms[i].intersect_with(&b);
    }
}

impl fmt::Debug for Domains {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Domains {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..self.len())
            .map(|i| {
                let v: Vec<String> = self.values(i).map(|x| (x + 1).to_string()).collect();
                format!("{{{}}}", v.join(","))
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Hall-set propagation to a fixpoint. Returns the number of values removed,
/// or `None` if some domain empties or a value set is shared by more
/// variables than it has values.
pub fn all_diff(doms: &mut Domains) -> Option<usize> {
    let k = doms.len();
    let mut removed = 0;
    loop {
        let mut changed = false;
        for i in 0..k {
            let size = doms.size(i);
            if size == 0 {
                return None;
            }
            let same: Vec<usize> = (0..k).filter(|&j| doms.doms[j] == doms.doms[i]).collect();
            if same.len() > size {
                return None;
            }
            if same.len() == size {
                let hall = doms.doms[i].clone();
                for j in 0..k {
                    if !same.contains(&j) && !doms.doms[j].is_disjoint(&hall) {
                        let before = doms.size(j);
                        doms.doms[j].difference_with(&hall);
                        removed += before - doms.size(j);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return Some(removed);
        }
    }
}

/// `(column is zero, size of its class)` for every column.
pub(crate) fn column_keys(m: &FpMatrix) -> Vec<(bool, usize)> {
    let (_, sizes) = column_classes(m);
    (0..m.cols()).map(|j| (m.column(j).iter().all(|&x| x == 0), sizes[j])).collect()
}

fn sorted_keys(m: &FpMatrix) -> Vec<(bool, usize)> {
    let mut keys = column_keys(m);
    keys.sort_unstable();
    keys
}

/// Cost bound on the minimum-weight enumeration beyond which `P_I` is skipped.
const MIN_WEIGHT_BUDGET: f64 = 5e6;

fn min_weight_affordable(m: &FpMatrix) -> bool {
    let (s, k, p) = (m.rows(), m.cols(), m.field().p() as f64);
    let top = s.min(k - s + 1);
    let mut cost = 0.0;
    let mut binom = 1.0;
    for i in 1..=top {
        binom = binom * (s + 1 - i) as f64 / i as f64;
        cost += binom * (p - 1.0).powi(i as i32 - 1);
    }
    cost <= MIN_WEIGHT_BUDGET
}

/// The orbit partition `P*` from dual equivalence classes, stabiliser
/// profiles on both codes and minimum-weight incidence, turned into domains;
/// plus normalising elements obtained from equivalent orbits of the dual.
pub fn domains_init(inst: &InPInstance, toggles: &PruneToggles) -> (Domains, Vec<Permutation>) {
    let k = inst.k();
    let mut part = Partition::from_cells(vec![(0..k).collect()]);
    let mut additions = Vec::new();
    if toggles.partitions {
        let m = inst.matrix();
        let md = inst.dual();
        part = part.meet(&Partition::from_labels(&column_keys(md)));
        for code in [m, md] {
            if code.rows() > 0 {
                let profiles: Vec<_> = (0..k).map(|i| sorted_keys(&stab_matrix(code, &[i]))).collect();
                part = part.meet(&Partition::from_labels(&profiles));
            }
        }
        if min_weight_affordable(m) {
            if let Ok(mw) = min_weight_vectors(m) {
                part = part.meet(&Partition::from_labels(&mw.incidence(k)));
            }
        }
        if md.rows() > 0 {
            for class in classes_with_scalars(md) {
                let first = class[0].0;
                for &(j, a) in &class[1..] {
                    let c = inst.psi_bar(first, j, a);
                    let Ok((b, kappa)) = inst.decompose_bk(&c) else { continue };
                    let x = b.inverse().mul(&kappa);
                    if inst.normalises(&x) {
                        additions.push(x);
                    }
                }
            }
        }
    }
    let sets: Vec<Vec<usize>> = (0..k).map(|i| part.cell_of(i).to_vec()).collect();
    (Domains::from_sets(k, &sets), additions)
}

/// Restricts each `doms[i]` to the orbit of `i` under a group acting on
/// orbit labels.
pub fn restrict_to_orbits(doms: &mut Domains, allowed: &PermGroup) {
    for i in 0..doms.len() {
        let orbit = allowed.orbit(i);
        doms.intersect_with(i, &orbit);
    }
}
