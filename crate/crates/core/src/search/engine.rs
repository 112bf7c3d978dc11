//! Depth-first search over orbit images.

use std::time::Instant;

use crate::canon::kappa_feasible;
use crate::encode::InPInstance;
use crate::error::Result;
use crate::perm::{PermGroup, Permutation, StabChain};

use super::domains::{all_diff, Domains};
use super::limit::{lifts, ColumnIndex};
use super::prune::{check_lds, compare_stabs, deep_prune, ld_sets, Columns, LdSet, StabProfile, StabVerdict, WeightGate};
use super::{Config, Stats};

enum Flow {
    Continue,
    /// Unwind to the node at this depth.
    Jump(usize),
    Abort,
}

pub(crate) struct Engine<'a> {
    inst: &'a InPInstance,
    cfg: &'a Config,
    limit: Option<ColumnIndex>,
    k: usize,
    lds: Vec<LdSet>,
    cols: Columns,
    src_stabs: Vec<StabProfile>,
    gate: WeightGate,
    allowed: Option<StabChain>,
    base: Vec<usize>,
    pub gens: Vec<Permutation>,
    images: Vec<Permutation>,
    chain: StabChain,
    alpha: Vec<usize>,
    pub stats: Stats,
    deadline: Option<Instant>,
    pub timed_out: bool,
}

impl<'a> Engine<'a> {
    pub fn new(
        inst: &'a InPInstance,
        cfg: &'a Config,
        allowed: Option<&PermGroup>,
        initial: Vec<Permutation>,
        limit: Option<ColumnIndex>,
        deadline: Option<Instant>,
    ) -> Result<Self> {
        let k = inst.k();
        let base: Vec<usize> = (0..k).collect();
        let allowed = allowed.map(|a| StabChain::with_base(a, &base));
        let mut src_stabs = Vec::new();
        if cfg.prune.stabs {
            src_stabs.push(StabProfile::new(inst.matrix().clone()));
            for c in 0..k {
                let next = src_stabs[c].extend(c);
                src_stabs.push(next);
            }
        }
        let mut engine = Self {
            inst,
            cfg,
            limit,
            k,
            lds: ld_sets(inst.matrix(), inst.dual()),
            cols: Columns::new(inst.matrix(), inst.dual()),
            src_stabs,
            gate: WeightGate { threshold: cfg.weight_gate, budget: cfg.weight_budget },
            allowed,
            base,
            gens: Vec::new(),
            images: Vec::new(),
            chain: PermGroup::trivial(k).stab_chain(),
            alpha: Vec::new(),
            stats: Stats::default(),
            deadline,
            timed_out: false,
        };
        for x in initial {
            let img = engine.induced(&x)?;
            let ok = engine.allowed.as_ref().map_or(true, |a| a.contains(&img));
            if ok && !x.is_identity() && !engine.gens.contains(&x) {
                engine.gens.push(x);
                engine.images.push(img);
            }
        }
        engine.rebuild();
        Ok(engine)
    }

    fn induced(&self, x: &Permutation) -> Result<Permutation> {
        Permutation::from_images(self.inst.orbit_permutation(x)?)
    }

    fn rebuild(&mut self) {
        let g = PermGroup::new(self.k, self.images.iter().cloned()).expect("degrees agree");
        self.chain = StabChain::with_base(&g, &self.base);
    }

    fn add(&mut self, x: Permutation, img: Permutation) {
        self.gens.push(x);
        self.images.push(img);
        self.stats.found += 1;
        self.rebuild();
    }

    pub fn run(&mut self, mut doms: Domains) {
        if self.cfg.prune.alldiff {
            if all_diff(&mut doms).is_none() {
                return;
            }
        } else if doms.is_dead() {
            return;
        }
        let img = if self.cfg.prune.stabs { Some(self.src_stabs[0].clone()) } else { None };
        self.recurse(0, &doms, img.as_ref());
    }

    fn expired(&mut self) -> bool {
        if self.deadline.is_some_and(|d| Instant::now() > d) {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn recurse(&mut self, d: usize, doms: &Domains, img: Option<&StabProfile>) -> Flow {
        let target = if self.limit.is_some() { self.inst.s() } else { self.k };
        if d == target {
            return self.leaf();
        }
        if self.expired() {
            return Flow::Abort;
        }
        let identity_prefix = self.alpha.iter().enumerate().all(|(i, &a)| i == a);
        let values = doms.to_vec(d);
        for v in values {
            if identity_prefix && v != d && self.chain.orbit_of_point(v, d).iter().any(|&x| x < v) {
                self.stats.pruned.minimality += 1;
                continue;
            }
            self.alpha.push(v);
            if self.allowed.as_ref().is_some_and(|a| !a.base_prefix_possible(&self.alpha)) {
                self.alpha.pop();
                continue;
            }
            self.stats.nodes += 1;
            let mut child = doms.clone();
            child.assign(d, v);
            let flow = match self.propagate(d, &mut child, img) {
                Some(child_img) => self.recurse(d + 1, &child, child_img.as_ref().or(img)),
                None => Flow::Continue,
            };
            self.alpha.pop();
            match flow {
                Flow::Abort => return Flow::Abort,
                Flow::Jump(j) if j < d => return Flow::Jump(j),
                _ => {}
            }
        }
        Flow::Continue
    }

    /// Applies the enabled rules after `d ↦ alpha[d]`. `None` kills the
    /// branch; otherwise carries the image-side stabiliser profile.
    fn propagate(&mut self, d: usize, doms: &mut Domains, img: Option<&StabProfile>) -> Option<Option<StabProfile>> {
        let count = d + 1;
        let prune = self.cfg.prune;
        let mut next_img = None;
        if let (true, Some(img)) = (prune.stabs, img) {
            let mut ni = img.extend(self.alpha[d]);
            let gate = (self.gate.threshold > 0).then_some(&self.gate);
            match compare_stabs(&mut self.src_stabs[count], &mut ni, count, doms, gate) {
                StabVerdict::ClassMismatch => {
                    self.stats.pruned.stabs_failed += 1;
                    return None;
                }
                StabVerdict::WeightMismatch => {
                    self.stats.pruned.weights_failed += 1;
                    return None;
                }
                StabVerdict::Pass { removed } => self.stats.pruned.stabs += removed as u64,
            }
            next_img = Some(ni);
        }
        if prune.lds {
            self.stats.pruned.lds += check_lds(self.inst.field(), &self.lds, &self.cols, &self.alpha, doms) as u64;
        }
        if prune.deep {
            self.stats.pruned.deep += deep_prune(self.inst.matrix(), &self.alpha, doms) as u64;
        }
        if prune.alldiff {
            match all_diff(doms) {
                Some(r) => self.stats.pruned.alldiff += r as u64,
                None => {
                    self.stats.pruned.alldiff_failed += 1;
                    return None;
                }
            }
        } else if doms.is_dead() {
            return None;
        }
        Some(next_img)
    }

    fn leaf(&mut self) -> Flow {
        self.stats.leaves += 1;
        let back = self.alpha.iter().enumerate().position(|(i, &a)| i != a).unwrap_or(self.alpha.len());
        if self.limit.is_some() {
            return self.limit_leaf(back);
        }
        if back == self.k {
            return Flow::Continue;
        }
        let perm = Permutation::from_images(self.alpha.clone()).expect("assignment is injective");
        if self.chain.contains(&perm) {
            return Flow::Jump(back);
        }
        self.stats.feasibility_tests += 1;
        match kappa_feasible(self.inst, &self.alpha) {
            Ok(Some(w)) => {
                self.add(w.element, perm);
                Flow::Jump(back)
            }
            _ => Flow::Continue,
        }
    }

    fn limit_leaf(&mut self, back: usize) -> Flow {
        let index = self.limit.as_ref().expect("limit mode");
        let Some(found) = lifts(self.inst, index, &self.alpha, &mut self.stats.lifts_tested, self.deadline) else {
            self.timed_out = true;
            return Flow::Abort;
        };
        let mut added = false;
        for x in found {
            let img = self.induced(&x).expect("lifts lie in L");
            if self.allowed.as_ref().is_some_and(|a| !a.contains(&img)) || self.chain.contains(&img) {
                continue;
            }
            self.add(x, img);
            added = true;
        }
        if added {
            Flow::Jump(back)
        } else {
            Flow::Continue
        }
    }
}
