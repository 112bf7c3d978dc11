//! Completion of a pivot assignment by enumerating the pivot scalars.

use std::collections::HashMap;
use std::time::Instant;

use crate::encode::{InPInstance, MonomialElement};
use crate::gfp::{normalise, rref_standard, FpMatrix, FpVector, PrimeField};
use crate::perm::Permutation;

/// Non-pivot columns of `M` indexed by their normalised form.
pub struct ColumnIndex {
    by_key: HashMap<FpVector, usize>,
}

impl ColumnIndex {
    /// `None` if two non-pivot columns are equivalent, since lifts would then
    /// not be unique.
    pub fn new(inst: &InPInstance) -> Option<Self> {
        let m = inst.matrix();
        let f = *inst.field();
        let mut by_key = HashMap::new();
        for j in inst.s()..inst.k() {
            if by_key.insert(normalise(&f, &m.column(j)), j).is_some() {
                return None;
            }
        }
        Some(Self { by_key })
    }
}

/// Every normalising element `b·κ̄` whose orbit permutation sends pivot `u`
/// to `alpha[u]`.
///
/// Writing `e` for the diagonal, `R = diag(e_0..e_{s-1})·A⁻¹` with
/// `A = M_{*,α}` is forced, and each remaining image column `c` must satisfy
/// `R·M_{*,c} = e_j M_{*,j}` for a unique unused column `j`, which fixes
/// `π(j) = c` and `e_j`. Returns `None` if `deadline` passes first.
pub fn lifts(
    inst: &InPInstance,
    index: &ColumnIndex,
    alpha: &[usize],
    tested: &mut u64,
    deadline: Option<Instant>,
) -> Option<Vec<Permutation>> {
    let f = *inst.field();
    let m = inst.matrix();
    let (s, k) = (inst.s(), inst.k());
    debug_assert_eq!(alpha.len(), s);
    let Ok(a) = rref_standard(&m.select_columns(alpha)) else {
        return Some(Vec::new());
    };
    if a.pivots.len() != s || !a.matrix.is_standard_form() {
        return Some(Vec::new());
    }
    let a_inv = a.transform;
    let mut used = vec![false; k];
    alpha.iter().for_each(|&c| used[c] = true);
    let free: Vec<usize> = (0..k).filter(|&c| !used[c]).collect();
    // A⁻¹·M_{*,c} for every free image column, scaled per row by e below
    let pre: Vec<FpVector> = free
        .iter()
        .map(|&c| a_inv.mul(&column_matrix(&m.column(c), f)).expect("shapes agree").column(0))
        .collect();

    let mut out = Vec::new();
    let mut e = vec![1u32; s];
    loop {
        *tested += 1;
        if *tested % 4096 == 0 && deadline.is_some_and(|d| Instant::now() > d) {
            return None;
        }
        if let Some(w) = match_columns(inst, index, alpha, &free, &pre, &e) {
            let x = inst.xi_preimage(&w).expect("well-formed monomial element");
            if inst.normalises(&x) {
                out.push(x);
            } else {
                debug_assert!(false, "lift failed verification");
            }
        }
        if !next_units(&mut e, f.p()) {
            break;
        }
    }
    Some(out)
}

fn match_columns(
    inst: &InPInstance,
    index: &ColumnIndex,
    alpha: &[usize],
    free: &[usize],
    pre: &[FpVector],
    e: &[u32],
) -> Option<MonomialElement> {
    let f = *inst.field();
    let m = inst.matrix();
    let (s, k) = (inst.s(), inst.k());
    let mut diag = vec![0u32; k];
    let mut perm = vec![usize::MAX; k];
    for u in 0..s {
        diag[u] = e[u];
        perm[u] = alpha[u];
    }
    let mut taken = vec![false; k];
    for (&c, v) in free.iter().zip(pre) {
        let v: FpVector = v.iter().zip(e).map(|(&x, &d)| f.mul(x, d)).collect();
        let lead = v.iter().position(|&x| x != 0)?;
        let j = *index.by_key.get(&normalise(&f, &v))?;
        if taken[j] {
            return None;
        }
        taken[j] = true;
        perm[j] = c;
        diag[j] = f.mul(v[lead], f.inv(m.get(lead, j)));
    }
    MonomialElement::new(diag, perm).ok()
}

fn column_matrix(v: &[u32], f: PrimeField) -> FpMatrix {
    let rows: Vec<FpVector> = v.iter().map(|&x| vec![x]).collect();
    FpMatrix::from_vectors(f, 1, &rows)
}

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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{build_instance, code_to_group};

    #[test]
    fn e1_lifts() {
        let m = FpMatrix::from_rows(PrimeField::new(2).unwrap(), &[[1, 0, 1], [0, 1, 1]]).unwrap();
        let inst = build_instance(&code_to_group(&m).unwrap(), 2).unwrap();
        let idx = ColumnIndex::new(&inst).unwrap();
        let mut tested = 0;
        for alpha in [[0, 1], [1, 0], [0, 2], [2, 1]] {
            let l = lifts(&inst, &idx, &alpha, &mut tested, None).unwrap();
            assert_eq!(l.len(), 1, "{alpha:?}");
            assert_eq!(&inst.orbit_permutation(&l[0]).unwrap()[..2], &alpha);
        }
    }

    #[test]
    fn p3_lifts_match_brute_force() {
        let m = FpMatrix::from_rows(PrimeField::new(3).unwrap(), &[[1, 0, 1, 1], [0, 1, 1, 2]]).unwrap();
        let inst = build_instance(&code_to_group(&m).unwrap(), 3).unwrap();
        let idx = ColumnIndex::new(&inst).unwrap();
        let maut = crate::oracle::brute_maut(inst.matrix(), crate::oracle::DEFAULT_BUDGET).unwrap();
        let mut tested = 0;
        let mut total = 0;
        for a in 0..4 {
            for b in (0..4).filter(|&b| b != a) {
                let l = lifts(&inst, &idx, &[a, b], &mut tested, None).unwrap();
                let expected = maut.iter().filter(|w| w.perm[0] == a && w.perm[1] == b).count();
                assert_eq!(l.len(), expected);
                total += l.len();
            }
        }
        assert_eq!(total, maut.len());
    }
}
