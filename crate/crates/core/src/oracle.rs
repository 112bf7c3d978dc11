//! Exhaustive reference computations. Nothing here is clever; everything
//! enumerates and counts exactly.

use num_bigint::BigUint;

use crate::encode::{InPInstance, MonomialElement};
use crate::error::{Error, Result};
use crate::gfp::{prec_compare, rref_standard, FpMatrix, FpVector};
use crate::perm::{PermGroup, Permutation, StabChain};

/// Largest number of elements any oracle will enumerate by default.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

fn check_budget(needed: Option<u64>, budget: u64) -> Result<u64> {
    match needed {
        Some(n) if n <= budget => Ok(n),
        Some(n) => Err(Error::BudgetExceeded { needed: n, budget }),
        None => Err(Error::BudgetExceeded { needed: u64::MAX, budget }),
    }
}

fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, x| acc.checked_mul(x))
}

/// Steps `perm` to its lexicographic successor; false after the last one.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

/// Odometer over `(F_p^*)^len` with entries in `1..p`.
fn next_units(v: &mut [u32], p: u32) -> bool {
    for x in v.iter_mut() {
        if *x + 1 < p {
            *x += 1;
            return true;
        }
        *x = 1;
    }
    false
}

/// Odometer over `F_p^len`.
fn next_vector(v: &mut [u32], p: u32) -> bool {
    for x in v.iter_mut() {
        if *x + 1 < p {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

/// A group accumulated one element at a time, with an exact element count
/// kept alongside.
#[derive(Clone, Debug)]
pub struct CollectedGroup {
    pub group: PermGroup,
    pub count: u64,
}

impl CollectedGroup {
    pub fn order(&self) -> BigUint {
        self.group.order()
    }
}

struct Collector {
    degree: usize,
    gens: Vec<Permutation>,
    chain: StabChain,
    count: u64,
}

impl Collector {
    fn new(degree: usize) -> Self {
        Self { degree, gens: Vec::new(), chain: PermGroup::trivial(degree).stab_chain(), count: 0 }
    }

    fn push(&mut self, x: Permutation) {
        self.count += 1;
        if !self.chain.contains(&x) {
            self.gens.push(x);
            self.chain = PermGroup::new(self.degree, self.gens.iter().cloned()).expect("degrees agree").stab_chain();
        }
    }

    fn finish(self) -> CollectedGroup {
        CollectedGroup { group: PermGroup::new(self.degree, self.gens).expect("degrees agree"), count: self.count }
    }
}

/// `MAut(⟨M⟩)` by testing every element of `W`. Sorted.
pub fn brute_maut(m: &FpMatrix, budget: u64) -> Result<Vec<MonomialElement>> {
    let f = *m.field();
    let k = m.cols();
    let units = (f.p() as u64 - 1).checked_pow(k as u32);
    check_budget(units.zip(factorial(k)).and_then(|(a, b)| a.checked_mul(b)), budget)?;
    let basis = rref_standard(m)?;
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let mut diag = vec![1u32; k];
        loop {
            let w = MonomialElement { diag: diag.clone(), perm: perm.clone() };
            if (0..m.rows()).all(|r| basis.coefficients(&w.apply(m.row(r), &f)).is_some()) {
                out.push(w);
            }
            if !next_units(&mut diag, f.p()) {
                break;
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    out.sort();
    Ok(out)
}

/// `N_{S_n}(H)` by testing every element of `S_n`.
pub fn brute_normalizer(h: &PermGroup, budget: u64) -> Result<CollectedGroup> {
    let n = h.degree();
    check_budget(factorial(n), budget)?;
    let chain = h.stab_chain();
    let mut acc = Collector::new(n);
    let mut images: Vec<usize> = (0..n).collect();
    loop {
        let x = Permutation::from_images(images.clone())?;
        if h.generators().iter().all(|g| chain.contains(&g.conj(&x))) {
            acc.push(x);
        }
        if !next_permutation(&mut images) {
            break;
        }
    }
    Ok(acc.finish())
}

/// The `≺`-least matrix `R A d` over all of `GL_s(p) × (F_p^*)^k`.
pub fn brute_canon_rep(a: &FpMatrix, budget: u64) -> Result<FpMatrix> {
    let f = *a.field();
    let (s, k) = (a.rows(), a.cols());
    let p = f.p() as u64;
    let size = p.checked_pow((s * s) as u32).zip((p - 1).checked_pow(k as u32)).and_then(|(x, y)| x.checked_mul(y));
    check_budget(size, budget)?;
    let mut best: Option<FpMatrix> = None;
    let mut entries = vec![0u32; s * s];
    loop {
        let rows: Vec<FpVector> = entries.chunks(s).map(|c| c.to_vec()).collect();
        let r = FpMatrix::from_vectors(f, s, &rows);
        if r.rank() == s {
            let ra = r.mul(a)?;
            let mut d = vec![1u32; k];
            loop {
                let cand = ra.scale_columns(&d);
                if best.as_ref().map_or(true, |b| prec_compare(&cand, b).expect("same shape").is_lt()) {
                    best = Some(cand);
                }
                if !next_units(&mut d, f.p()) {
                    break;
                }
            }
        }
        if !next_vector(&mut entries, f.p()) {
            break;
        }
    }
    best.ok_or(Error::ZeroMatrix)
}

/// Per-orbit affine maps `u ↦ a_i u + c_i` in frame coordinates: the group
/// `B` of elements fixing every orbit and normalising every `⟨g_i⟩`.
pub fn affine_element(inst: &InPInstance, maps: &[(u32, u32)]) -> Permutation {
    let p = inst.p() as usize;
    let mut images: Vec<usize> = (0..inst.n()).collect();
    for (frame, &(a, c)) in inst.frames().iter().zip(maps) {
        let pts = frame.points();
        for u in 0..p {
            images[pts[u]] = pts[(a as usize * u + c as usize) % p];
        }
    }
    Permutation::from_images(images).expect("affine maps with unit slope are bijective")
}

fn for_each_b(inst: &InPInstance, budget: u64, mut visit: impl FnMut(Permutation) -> bool) -> Result<()> {
    let p = inst.p();
    let k = inst.k();
    check_budget((p as u64 * (p as u64 - 1)).checked_pow(k as u32), budget)?;
    let mut slopes = vec![1u32; k];
    loop {
        let mut shifts = vec![0u32; k];
        loop {
            let maps: Vec<(u32, u32)> = slopes.iter().copied().zip(shifts.iter().copied()).collect();
            if !visit(affine_element(inst, &maps)) {
                return Ok(());
            }
            if !next_vector(&mut shifts, p) {
                break;
            }
        }
        if !next_units(&mut slopes, p) {
            break;
        }
    }
    Ok(())
}

/// `N_B(H)` by testing every element of `B`.
pub fn brute_nb(inst: &InPInstance, budget: u64) -> Result<CollectedGroup> {
    let mut acc = Collector::new(inst.n());
    for_each_b(inst, budget, |b| {
        if inst.normalises(&b) {
            acc.push(b);
        }
        true
    })?;
    Ok(acc.finish())
}

/// Some `b ∈ B` with `b·κ̄` normalising `H`, found by enumeration.
pub fn brute_b_for_kappa(inst: &InPInstance, pi: &[usize]) -> Option<Permutation> {
    let kappa = inst.kappa(pi);
    let mut found = None;
    for_each_b(inst, DEFAULT_BUDGET, |b| {
        if inst.normalises(&b.mul(&kappa)) {
            found = Some(b);
            false
        } else {
            true
        }
    })
    .ok()?;
    found
}

/// `|W|`-enumeration count times `p^k`, the order `N_{S_n}(H)` must have.
pub fn expected_normalizer_order(m: &FpMatrix, budget: u64) -> Result<BigUint> {
    let maut = brute_maut(m, budget)?.len();
    Ok(BigUint::from(m.field().p()).pow(m.cols() as u32) * BigUint::from(maut))
}
