//! The normaliser search: `N_B(H)` up front, then a backtrack over orbit
//! permutations with feasibility decided by canonical forms (or, in
//! limit-depth mode, by enumerating pivot scalars).

mod domains;
mod engine;
mod limit;
mod nbh;
mod prune;

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::encode::{build_instance, reduce_equivalent_orbits, InPInstance};
use crate::error::{Error, Result};
use crate::gfp::column_equiv_classes;
use crate::perm::{PermGroup, Permutation};

pub use domains::{all_diff, domains_init, restrict_to_orbits, Domains};
pub use limit::{lifts, ColumnIndex};
pub use nbh::{direct_components, norm_bh, norm_bh_generators};
pub use prune::{
    check_lds, compare_stabs, deep_prune, ld_sets, Columns, LdSet, StabProfile, StabVerdict, WeightGate,
};

/// One switchable pruning rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PruneRule {
    Lds,
    Stabs,
    Deep,
    AllDiff,
    Partitions,
}

impl PruneRule {
    pub const ALL: [PruneRule; 5] = [Self::Lds, Self::Stabs, Self::Deep, Self::AllDiff, Self::Partitions];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lds => "lds",
            Self::Stabs => "stabs",
            Self::Deep => "deep",
            Self::AllDiff => "alldiff",
            Self::Partitions => "partitions",
        }
    }
}

impl fmt::Display for PruneRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PruneRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown pruning rule `{s}`")))
    }
}

/// Which pruning rules are enabled. `partitions` covers the invariant
/// partitions used to seed the domains and the dual-code additions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneToggles {
    pub lds: bool,
    pub stabs: bool,
    pub deep: bool,
    pub alldiff: bool,
    pub partitions: bool,
}

impl Default for PruneToggles {
    fn default() -> Self {
        Self { lds: true, stabs: true, deep: true, alldiff: true, partitions: true }
    }
}

impl PruneToggles {
    pub fn none() -> Self {
        Self { lds: false, stabs: false, deep: false, alldiff: false, partitions: false }
    }

    pub fn without(mut self, rule: PruneRule) -> Self {
        match rule {
            PruneRule::Lds => self.lds = false,
            PruneRule::Stabs => self.stabs = false,
            PruneRule::Deep => self.deep = false,
            PruneRule::AllDiff => self.alldiff = false,
            PruneRule::Partitions => self.partitions = false,
        }
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Full,
    LimitDepth,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::LimitDepth => "limitdepth",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub method: Method,
    pub prune: PruneToggles,
    /// Weight enumerators are compared only when `rows·p` is at most this;
    /// 0 disables the comparison.
    pub weight_gate: u64,
    /// Largest code size enumerated for a weight enumerator.
    pub weight_budget: u64,
    pub timeout: Option<Duration>,
    /// Search on the dual code when its dimension is smaller.
    pub dual_swap: bool,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            method: Method::Full,
            prune: PruneToggles::default(),
            weight_gate: 45,
            weight_budget: 1 << 20,
            timeout: None,
            dual_swap: true,
        }
    }
}

impl Config {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_prune(mut self, prune: PruneToggles) -> Self {
        self.prune = prune;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = Some(timeout);
        self
    }
}

/// Domain values removed (or branches killed, for the `_failed` counters)
/// by each rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    pub minimality: u64,
    pub lds: u64,
    pub stabs: u64,
    pub stabs_failed: u64,
    pub weights_failed: u64,
    pub deep: u64,
    pub alldiff: u64,
    pub alldiff_failed: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    pub leaves: u64,
    pub feasibility_tests: u64,
    pub lifts_tested: u64,
    pub found: u64,
    pub pruned: PruneCounts,
    pub elapsed_ms: u64,
}

impl Stats {
    fn absorb(&mut self, other: &Stats) {
        self.nodes += other.nodes;
        self.leaves += other.leaves;
        self.feasibility_tests += other.feasibility_tests;
        self.lifts_tested += other.lifts_tested;
        self.found += other.found;
        let (a, b) = (&mut self.pruned, &other.pruned);
        a.minimality += b.minimality;
        a.lds += b.lds;
        a.stabs += b.stabs;
        a.stabs_failed += b.stabs_failed;
        a.weights_failed += b.weights_failed;
        a.deep += b.deep;
        a.alldiff += b.alldiff;
        a.alldiff_failed += b.alldiff_failed;
    }
}

#[derive(Clone, Debug)]
pub struct NormalizerResult {
    pub degree: usize,
    /// Every generator has been checked to normalise `H`.
    pub generators: Vec<Permutation>,
    pub order: BigUint,
    pub stats: Stats,
    /// The search stopped at the deadline; the group may be too small.
    pub timed_out: bool,
}

impl NormalizerResult {
    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.generators.iter().cloned()).expect("degrees agree")
    }
}

/// `N_{S_n}(H)` for `H` acting with all orbits of size `p` and cyclic
/// restrictions.
pub fn normalizer(h: &PermGroup, p: u32, config: &Config) -> Result<NormalizerResult> {
    normalizer_of_instance(&build_instance(h, p)?, config)
}

/// Full pipeline on a recognised instance: equivalent orbits are first
/// collapsed to one representative per class and restored afterwards.
pub fn normalizer_of_instance(inst: &InPInstance, config: &Config) -> Result<NormalizerResult> {
    let start = Instant::now();
    let deadline = config.timeout.map(|t| start + t);
    let red = reduce_equivalent_orbits(inst)?;
    if red.is_identity() {
        let out = solve(inst, None, config, deadline)?;
        return finish(inst, out.gens, out.stats, out.timed_out, start);
    }
    let inst1 = build_instance(&red.h1, inst.p())?;
    let allowed = colour_group(&inst1, &red.colours);
    let out = solve(&inst1, Some(&allowed), config, deadline)?;
    let mut gens = out.gens.iter().map(|u| red.theta(u)).collect::<Result<Vec<_>>>()?;
    gens.extend(red.centralizer.generators().iter().cloned());
    finish(inst, gens, out.stats, out.timed_out, start)
}

/// The backtrack with canonical-form feasibility at the leaves, without the
/// equivalent-orbit reduction.
pub fn full_search(inst: &InPInstance, config: &Config) -> Result<NormalizerResult> {
    let config = config.clone().with_method(Method::Full);
    search_allowed(inst, None, &config)
}

/// The backtrack cut at depth `s`, completing each pivot assignment by
/// enumerating all `(p−1)^s` pivot scalars. Needs pairwise inequivalent
/// orbits.
pub fn limit_depth(inst: &InPInstance, config: &Config) -> Result<NormalizerResult> {
    let config = config.clone().with_method(Method::LimitDepth);
    search_allowed(inst, None, &config)
}

/// Elements of `N_{S_n}(H)` whose orbit permutation lies in `allowed`
/// (a group on orbit labels), or all of `N_{S_n}(H)` when `allowed` is
/// `None`.
pub fn search_allowed(inst: &InPInstance, allowed: Option<&PermGroup>, config: &Config) -> Result<NormalizerResult> {
    let start = Instant::now();
    let deadline = config.timeout.map(|t| start + t);
    let out = solve(inst, allowed, config, deadline)?;
    finish(inst, out.gens, out.stats, out.timed_out, start)
}

struct SolveOutput {
    gens: Vec<Permutation>,
    stats: Stats,
    timed_out: bool,
}

/// Young subgroup on orbit labels preserving `colours` (indexed by point).
fn colour_group(inst: &InPInstance, colours: &[usize]) -> PermGroup {
    let k = inst.k();
    let colour: Vec<usize> = (0..k).map(|i| colours[inst.frames()[i].anchor()]).collect();
    let mut gens = Vec::new();
    for i in 0..k {
        if let Some(j) = (i + 1..k).find(|&j| colour[j] == colour[i]) {
            gens.push(Permutation::from_cycles(k, &[[i, j]]).expect("distinct labels"));
        }
    }
    PermGroup::new(k, gens).expect("degrees agree")
}

fn dual_is_usable(inst: &InPInstance) -> bool {
    inst.dual().rows() > 0
        && column_equiv_classes(inst.dual()).is_ok_and(|p| p.len() == inst.k())
}

fn solve(inst: &InPInstance, allowed: Option<&PermGroup>, config: &Config, deadline: Option<Instant>) -> Result<SolveOutput> {
    if !(config.dual_swap && 2 * inst.s() > inst.k() && dual_is_usable(inst)) {
        return run_engine(inst, allowed, config, deadline);
    }
    let dinst = inst.dual_instance()?;
    // dual label l is primal label to_primal[l]
    let to_primal: Vec<usize> = dinst
        .anchors()
        .iter()
        .map(|&a| inst.locate(a).expect("same frames").0)
        .collect();
    let mut to_dual = vec![0; inst.k()];
    for (l, &i) in to_primal.iter().enumerate() {
        to_dual[i] = l;
    }
    let allowed_dual = allowed
        .map(|a| {
            let gens = a
                .generators()
                .iter()
                .map(|g| Permutation::from_images((0..inst.k()).map(|l| to_dual[g.image(to_primal[l])]).collect()))
                .collect::<Result<Vec<_>>>()?;
            PermGroup::new(inst.k(), gens)
        })
        .transpose()?;
    let out = run_engine(&dinst, allowed_dual.as_ref(), config, deadline)?;
    let gens = out
        .gens
        .iter()
        .map(|x| {
            let (b, kappa) = dinst.decompose_bk(x)?;
            Ok(b.inverse().mul(&kappa))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolveOutput { gens, ..out })
}

fn run_engine(inst: &InPInstance, allowed: Option<&PermGroup>, config: &Config, deadline: Option<Instant>) -> Result<SolveOutput> {
    let limit = match config.method {
        Method::Full => None,
        Method::LimitDepth => Some(ColumnIndex::new(inst).ok_or_else(|| {
            Error::Unsupported("limit-depth search needs pairwise inequivalent orbits".into())
        })?),
    };
    let mut initial = norm_bh_generators(inst);
    initial.extend(inst.centralizer().generators().iter().cloned());
    let (mut doms, additions) = domains_init(inst, &config.prune);
    initial.extend(additions);
    if let Some(a) = allowed {
        restrict_to_orbits(&mut doms, a);
    }
    let mut engine = engine::Engine::new(inst, config, allowed, initial, limit, deadline)?;
    engine.run(doms);
    Ok(SolveOutput { gens: engine.gens, stats: engine.stats, timed_out: engine.timed_out })
}

fn finish(inst: &InPInstance, gens: Vec<Permutation>, stats: Stats, timed_out: bool, start: Instant) -> Result<NormalizerResult> {
    let mut generators: Vec<Permutation> = Vec::new();
    for g in gens {
        if !inst.normalises(&g) {
            return Err(Error::NotInL(format!("search produced {g}, which does not normalise the group")));
        }
        if !g.is_identity() && !generators.contains(&g) {
            generators.push(g);
        }
    }
    let group = PermGroup::new(inst.n(), generators.iter().cloned())?;
    let mut stats = stats;
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(NormalizerResult { degree: inst.n(), generators, order: group.order(), stats, timed_out })
}

#[doc(hidden)]
pub fn merge_stats(into: &mut Stats, other: &Stats) {
    into.absorb(other);
}
