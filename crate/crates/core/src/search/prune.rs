//! Pruning rules applied after every assignment.

use crate::encode::stab_matrix;
use crate::gfp::{weight_enumerator, FpMatrix, FpVector, PrimeField, WeightEnumerator};

use super::domains::{column_keys, Domains};

/// A set of columns of `M` (or of `M^⊥` when `dual`) carrying a linear
/// relation with all coefficients nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdSet {
    pub members: Vec<usize>,
    pub dual: bool,
}

/// Relations read off the standard forms: each non-pivot column of `M`
/// against the pivots it touches, and likewise for `M^⊥ = (−M_0^T | I)`.
pub fn ld_sets(m: &FpMatrix, mdual: &FpMatrix) -> Vec<LdSet> {
    let (s, k) = (m.rows(), m.cols());
    let mut out = Vec::new();
    for i in s..k {
        let mut members = vec![i];
        members.extend((0..s).filter(|&j| m.get(j, i) != 0));
        out.push(LdSet { members, dual: false });
    }
    for i in 0..s {
        let mut members = vec![i];
        members.extend((0..mdual.rows()).filter(|&r| mdual.get(r, i) != 0).map(|r| s + r));
        out.push(LdSet { members, dual: true });
    }
    out
}

/// Incremental echelon basis of a span of column vectors.
struct Span<'a> {
    f: &'a PrimeField,
    rows: Vec<(usize, FpVector)>,
}

impl<'a> Span<'a> {
    fn new(f: &'a PrimeField) -> Self {
        Self { f, rows: Vec::new() }
    }

    fn reduce(&self, v: &[u32]) -> FpVector {
        let mut v = v.to_vec();
        for (piv, r) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(r) {
                    *x = self.f.sub(*x, self.f.mul(c, y));
                }
            }
        }
        v
    }

    fn insert(&mut self, v: &[u32]) {
        let v = self.reduce(v);
        if let Some(piv) = v.iter().position(|&x| x != 0) {
            let inv = self.f.inv(v[piv]);
            let v: FpVector = v.iter().map(|&x| self.f.mul(x, inv)).collect();
            for (_, r) in self.rows.iter_mut() {
                let c = r[piv];
                if c != 0 {
                    for (x, &y) in r.iter_mut().zip(&v) {
                        *x = self.f.sub(*x, self.f.mul(c, y));
                    }
                }
            }
            self.rows.push((piv, v));
        }
    }

    fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Columns of `M` and `M^⊥`, cached as vectors.
pub struct Columns {
    pub primal: Vec<FpVector>,
    pub dual: Vec<FpVector>,
}

impl Columns {
    pub fn new(m: &FpMatrix, mdual: &FpMatrix) -> Self {
        Self {
            primal: (0..m.cols()).map(|j| m.column(j)).collect(),
            dual: (0..mdual.cols()).map(|j| mdual.column(j)).collect(),
        }
    }
}

/// For every relation with exactly one unassigned member, keeps only the
/// candidate images whose column lies in the span of the assigned images'
/// columns. `alpha` holds the images of orbits `0..alpha.len()`.
pub fn check_lds(f: &PrimeField, sets: &[LdSet], cols: &Columns, alpha: &[usize], doms: &mut Domains) -> usize {
    let count = alpha.len();
    let mut removed = 0;
    for set in sets {
        let mut open = set.members.iter().filter(|&&u| u >= count);
        let (Some(&u), None) = (open.next(), open.next()) else { continue };
        let c = if set.dual { &cols.dual } else { &cols.primal };
        let mut span = Span::new(f);
        for &a in set.members.iter().filter(|&&a| a < count) {
            span.insert(&c[alpha[a]]);
        }
        removed += doms.retain(u, |j| span.contains(&c[j]));
    }
    removed
}

/// Invariants of a stabiliser code that any normalising element must carry
/// from the source to the image side.
#[derive(Clone, Debug)]
pub struct StabProfile {
    pub matrix: FpMatrix,
    pub keys: Vec<(bool, usize)>,
    pub sorted: Vec<(bool, usize)>,
    weights: Option<Option<WeightEnumerator>>,
}

impl StabProfile {
    pub fn new(matrix: FpMatrix) -> Self {
        let keys = column_keys(&matrix);
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        Self { matrix, keys, sorted, weights: None }
    }

    /// Profile of the stabiliser of one more orbit.
    pub fn extend(&self, col: usize) -> Self {
        Self::new(stab_matrix(&self.matrix, &[col]))
    }

    fn weights(&mut self, gate: &WeightGate) -> Option<&WeightEnumerator> {
        if self.weights.is_none() {
            let rows = self.matrix.rows();
            let p = self.matrix.field().p();
            let we = if rows as u64 * p as u64 <= gate.threshold {
                weight_enumerator(&self.matrix, gate.budget).ok()
            } else {
                None
            };
            self.weights = Some(we);
        }
        self.weights.as_ref().and_then(|w| w.as_ref())
    }
}

/// When to compare weight enumerators: only if `rows·p` is at most
/// `threshold` and `p^rows` is within `budget`.
#[derive(Clone, Copy, Debug)]
pub struct WeightGate {
    pub threshold: u64,
    pub budget: u64,
}

/// Outcome of [`compare_stabs`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabVerdict {
    Pass { removed: usize },
    ClassMismatch,
    WeightMismatch,
}

/// Compares the stabiliser of orbits `0..count` with that of their images.
/// On success every unassigned orbit keeps only images with the same class
/// key.
pub fn compare_stabs(
    src: &mut StabProfile,
    img: &mut StabProfile,
    count: usize,
    doms: &mut Domains,
    gate: Option<&WeightGate>,
) -> StabVerdict {
    if src.matrix.rows() != img.matrix.rows() || src.sorted != img.sorted {
        return StabVerdict::ClassMismatch;
    }
    let mut removed = 0;
    for i in count..doms.len() {
        let key = src.keys[i];
        removed += doms.retain(i, |j| img.keys[j] == key);
    }
    if let Some(gate) = gate {
        let a = src.weights(gate).cloned();
        let b = img.weights(gate);
        if let (Some(a), Some(b)) = (a, b) {
            if &a != b {
                return StabVerdict::WeightMismatch;
            }
        }
    }
    StabVerdict::Pass { removed }
}

/// Once all pivots are placed: if `M_{i,α_u}·M_{u,t} = 0` for every pivot
/// `u`, the image of `t` must lie in the zero set of row `i`.
pub fn deep_prune(m: &FpMatrix, alpha: &[usize], doms: &mut Domains) -> usize {
    let (s, k) = (m.rows(), m.cols());
    let count = alpha.len();
    if count < s {
        return 0;
    }
    let mut removed = 0;
    for i in 0..s {
        for t in count..k {
            if (0..s).all(|u| m.get(i, alpha[u]) == 0 || m.get(u, t) == 0) {
                removed += doms.retain(t, |j| m.get(i, j) == 0);
            }
        }
    }
    removed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfp::dual_matrix;

    fn mat(p: u32, rows: &[&[i64]]) -> FpMatrix {
        FpMatrix::from_rows(PrimeField::new(p).unwrap(), rows).unwrap()
    }

    #[test]
    fn lds_examples() {
        let m = mat(2, &[&[1, 0, 1], &[0, 1, 1]]);
        let md = dual_matrix(&m).unwrap();
        let sets = ld_sets(&m, &md);
        assert_eq!(sets[0], LdSet { members: vec![2, 0, 1], dual: false });
        let cols = Columns::new(&m, &md);
        let f = *m.field();
        let mut d = Domains::full(3);
        d.assign(0, 0);
        d.assign(1, 1);
        check_lds(&f, &sets, &cols, &[0, 1], &mut d);
        assert_eq!(d.to_vec(2), vec![2]);
        let mut d = Domains::full(3);
        d.assign(0, 1);
        d.assign(1, 0);
        assert_eq!(check_lds(&f, &sets, &cols, &[1, 0], &mut d), 0);
        let mut d = Domains::full(3);
        assert_eq!(check_lds(&f, &sets, &cols, &[], &mut d), 0);
    }

    #[test]
    fn lds_span_removes() {
        // column 4 = column 1 over F_3, so its image must be a multiple of α_1's column
        let m = mat(3, &[&[1, 0, 1, 1], &[0, 1, 0, 1]]);
        let md = dual_matrix(&m).unwrap();
        let sets = ld_sets(&m, &md);
        let cols = Columns::new(&m, &md);
        let mut d = Domains::full(4);
        d.assign(0, 0);
        let removed = check_lds(m.field(), &sets, &cols, &[0], &mut d);
        assert!(removed > 0);
        assert_eq!(d.to_vec(2), vec![2]);
    }

    #[test]
    fn stabs_examples() {
        let m = mat(2, &[&[1, 0, 1], &[0, 1, 1]]);
        let mut a = StabProfile::new(m.clone());
        let mut b = StabProfile::new(m.clone());
        let mut d = Domains::full(3);
        let gate = WeightGate { threshold: 45, budget: 1 << 20 };
        assert_eq!(compare_stabs(&mut a, &mut b, 0, &mut d, Some(&gate)), StabVerdict::Pass { removed: 0 });

        // class sizes {2,2} against {1,1,2}
        let x = mat(2, &[&[1, 0, 1, 0], &[0, 1, 0, 1]]);
        let y = mat(2, &[&[1, 0, 1, 1], &[0, 1, 0, 1]]);
        let mut d = Domains::full(4);
        let v = compare_stabs(&mut StabProfile::new(x), &mut StabProfile::new(y), 0, &mut d, None);
        assert_eq!(v, StabVerdict::ClassMismatch);
    }

    #[test]
    fn weights_distinguish() {
        // equal class profiles, different weight distributions
        let x = mat(2, &[&[1, 0, 0, 0, 0, 1], &[0, 1, 0, 1, 0, 0], &[0, 0, 1, 1, 1, 0]]);
        let y = mat(2, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 1, 0, 1], &[0, 0, 1, 1, 1, 1]]);
        let (mut a, mut b) = (StabProfile::new(x.clone()), StabProfile::new(y.clone()));
        assert_eq!(a.sorted, b.sorted);
        let gate = WeightGate { threshold: 45, budget: 1 << 20 };
        let mut d = Domains::full(6);
        assert_eq!(compare_stabs(&mut a, &mut b, 0, &mut d, Some(&gate)), StabVerdict::WeightMismatch);
        // no monomial map carries one code onto the other
        let joined = |w: &crate::encode::MonomialElement| {
            let moved = w.apply_matrix(&x);
            moved.same_row_space(&y)
        };
        let all = crate::oracle::brute_maut(&FpMatrix::identity(*x.field(), 6), crate::oracle::DEFAULT_BUDGET).unwrap();
        assert!(!all.iter().any(joined));
    }

    #[test]
    fn deep_prune_examples() {
        let m = FpMatrix::identity(PrimeField::new(2).unwrap(), 3);
        let mut d = Domains::full(3);
        assert_eq!(deep_prune(&m, &[0, 1, 2], &mut d), 0);
        // row 1 meets only pivot 1 and column 3; with pivots fixed, column 4's
        // image must avoid row 1's support
        let m = mat(2, &[&[1, 0, 1, 0], &[0, 1, 1, 1]]);
        let mut d = Domains::full(4);
        d.assign(0, 0);
        d.assign(1, 1);
        deep_prune(&m, &[0, 1], &mut d);
        assert!(d.values(3).all(|j| m.get(0, j) == 0));
    }
}
