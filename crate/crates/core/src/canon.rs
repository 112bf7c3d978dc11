//! Canonical representatives of generator matrices under
//! `F = GL_s(p) × (F_p^*)^k` acting by `(R, d): A ↦ R⁻¹ A d`, and the
//! orbit-permutation feasibility test built on them.

use crate::encode::{InPInstance, MonomialElement};
use crate::error::{Error, Result};
use crate::gfp::{rref_standard, FpMatrix, Partition};
use crate::perm::Permutation;

/// `Q_j` for every column `j`: the finest partition of the rows such that
/// the support of each of the first `j + 1` columns lies in one cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPartitions {
    q: Vec<Partition>,
}

impl SupportPartitions {
    pub fn get(&self, j: usize) -> &Partition {
        &self.q[j]
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

pub fn support_partitions(a: &FpMatrix) -> Result<SupportPartitions> {
    if !a.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let s = a.rows();
    let mut cells = Cells::new(s);
    let mut q = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        if j >= s {
            cells.merge_support(a, j);
        }
        q.push(cells.partition());
    }
    Ok(SupportPartitions { q })
}

/// Row cells as labels, merged by column supports.
struct Cells {
    label: Vec<usize>,
}

impl Cells {
    fn new(s: usize) -> Self {
        Self { label: (0..s).collect() }
    }

    fn merge_support(&mut self, a: &FpMatrix, j: usize) {
        let hit: Vec<usize> = (0..a.rows()).filter(|&i| a.get(i, j) != 0).map(|i| self.label[i]).collect();
        if let Some(&target) = hit.iter().min() {
            for l in self.label.iter_mut() {
                if hit.contains(l) {
                    *l = target;
                }
            }
        }
    }

    fn same(&self, a: usize, b: usize) -> bool {
        self.label[a] == self.label[b]
    }

    fn partition(&self) -> Partition {
        Partition::from_labels(&self.label)
    }
}

/// `rep = r_inv · A · diag(d)` is the `≺`-least matrix in the `F`-orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonResult {
    pub rep: FpMatrix,
    pub r_inv: FpMatrix,
    pub d: Vec<u32>,
}

impl CanonResult {
    /// `R` itself.
    pub fn r(&self) -> FpMatrix {
        rref_standard(&self.r_inv).expect("R⁻¹ is invertible").transform
    }
}

/// Canonical representative of `A`'s `F`-orbit. `A` must have full row rank
/// with its first `s` columns independent; the input is first brought to
/// standard form.
///
/// The least element has the identity in its first `s` columns, leaving only
/// the torus `A_{ij} ↦ c_i⁻¹ A_{ij} d_j`. Columns are then fixed one at a
/// time: within each cell of the current support partition the bottom-most
/// nonzero entry of the column is scaled to 1 by rescaling the cell's rows,
/// and the earlier columns meeting the cell are rescaled back.
pub fn canonical_rep(a: &FpMatrix) -> Result<CanonResult> {
    let f = *a.field();
    let s = a.rows();
    let k = a.cols();
    let std = rref_standard(a)?;
    if !std.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let mut work = std.matrix;
    let mut row_scale = vec![1u32; s];
    let mut d = vec![1u32; k];
    let mut cells = Cells::new(s);
    for j in s..k {
        for i in (0..s).rev() {
            let x = work.get(i, j);
            if x == 0 || x == 1 || (i + 1..s).any(|r| cells.same(r, i) && work.get(r, j) != 0) {
                continue;
            }
            let xinv = f.inv(x);
            let rows: Vec<usize> = (0..s).filter(|&r| cells.same(r, i)).collect();
            for &r in &rows {
                work.scale_row(r, xinv);
                row_scale[r] = f.mul(row_scale[r], xinv);
            }
            for l in 0..j {
                if rows.iter().any(|&r| work.get(r, l) != 0) {
                    work.scale_column(l, x);
                    d[l] = f.mul(d[l], x);
                }
            }
        }
        cells.merge_support(&work, j);
    }
    let mut r_inv = std.transform;
    for (i, &c) in row_scale.iter().enumerate() {
        r_inv.scale_row(i, c);
    }
    debug_assert_eq!(r_inv.mul(a).unwrap().scale_columns(&d), work);
    Ok(CanonResult { rep: work, r_inv, d })
}

/// `R⁻¹ A d`.
pub fn apply_f(a: &FpMatrix, r: &FpMatrix, d: &[u32]) -> Result<FpMatrix> {
    let r_inv = rref_standard(r)?.transform;
    Ok(r_inv.mul(a)?.scale_columns(d))
}

/// A normalising element `b·κ̄` realising a given orbit permutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Feasible {
    pub b: Permutation,
    pub kappa: Permutation,
    pub element: Permutation,
}

/// Decides whether some `b ∈ B` makes `b·κ̄` normalise `H`, where `κ̄ ∈ K`
/// sends `Ω_i` to `Ω_{π(i)}`.
///
/// `M' = M·(1, π)` spans the permuted code. A suitable `b` exists iff the
/// two codes differ by a diagonal, which fails outright when the first `s`
/// columns of `M'` are dependent and is otherwise read off from the
/// canonical forms.
pub fn kappa_feasible(inst: &InPInstance, pi: &[usize]) -> Result<Option<Feasible>> {
    let k = inst.k();
    let s = inst.s();
    if pi.len() != k {
        return Err(Error::Dimension(format!("orbit permutation of length {} for {k} orbits", pi.len())));
    }
    let f = *inst.field();
    let m = inst.matrix();
    let moved = MonomialElement::new(vec![1; k], pi.to_vec())?.apply_matrix(m);
    if moved.select_columns(&(0..s).collect::<Vec<_>>()).rank() < s {
        return Ok(None);
    }
    let moved_std = rref_standard(&moved)?.matrix;
    let c1 = canonical_rep(m)?;
    let c2 = canonical_rep(&moved_std)?;
    if c1.rep != c2.rep {
        return Ok(None);
    }
    let diag: Vec<u32> = (0..k).map(|i| f.mul(c2.d[pi[i]], f.inv(c1.d[pi[i]]))).collect();
    let b = inst.scaling_element(&diag)?;
    let kappa = inst.kappa(pi);
    let element = b.mul(&kappa);
    if !inst.normalises(&element) {
        return Err(Error::NotInL("feasibility witness failed verification".into()));
    }
    Ok(Some(Feasible { b, kappa, element }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encode::{build_instance, code_to_group};
    use crate::gfp::{FpVector, PrimeField};
    use crate::oracle;

    fn mat(p: u32, rows: &[&[i64]]) -> FpMatrix {
        FpMatrix::from_rows(PrimeField::new(p).unwrap(), rows).unwrap()
    }

    #[test]
    fn support_partition_examples() {
        let q = support_partitions(&mat(2, &[&[1, 0, 1], &[0, 1, 1]])).unwrap();
        assert_eq!(q.get(0), &Partition::discrete(2));
        assert_eq!(q.get(1), &Partition::discrete(2));
        assert_eq!(q.get(2).cells(), &[vec![0, 1]]);
        let q = support_partitions(&FpMatrix::identity(PrimeField::new(3).unwrap(), 3)).unwrap();
        assert!((0..3).all(|j| q.get(j) == &Partition::discrete(3)));
        let q = support_partitions(&mat(2, &[&[1, 0, 1, 0], &[0, 1, 0, 1]])).unwrap();
        assert_eq!(q.get(2), &Partition::discrete(2));
        assert_eq!(q.get(3), &Partition::discrete(2));
        assert!(support_partitions(&mat(2, &[&[0, 1]])).is_err());
    }

    #[test]
    fn canonical_examples() {
        let id = FpMatrix::identity(PrimeField::new(5).unwrap(), 3);
        let c = canonical_rep(&id).unwrap();
        assert_eq!(c.rep, id);
        assert_eq!(c.d, vec![1, 1, 1]);
        assert_eq!(c.r(), id);

        let a = mat(3, &[&[1, 0, 1, 2], &[0, 1, 1, 1]]);
        let c = canonical_rep(&a).unwrap();
        assert_eq!(c.rep, oracle::brute_canon_rep(&a, oracle::DEFAULT_BUDGET).unwrap());
        assert_eq!(c.r_inv.mul(&a).unwrap().scale_columns(&c.d), c.rep);
    }

    #[test]
    fn literal_condition_is_not_invariant() {
        // [1 2] and [1 1] are one F-orbit; the representative must agree
        let a = canonical_rep(&mat(3, &[&[1, 2]])).unwrap();
        let b = canonical_rep(&mat(3, &[&[1, 1]])).unwrap();
        assert_eq!(a.rep, b.rep);
        assert_eq!(a.rep, mat(3, &[&[1, 1]]));
    }

    #[test]
    fn feasibility_examples() {
        let h = code_to_group(&mat(2, &[&[1, 0, 1], &[0, 1, 1]])).unwrap();
        let inst = build_instance(&h, 2).unwrap();
        let id = kappa_feasible(&inst, &[0, 1, 2]).unwrap().unwrap();
        assert!(id.b.is_identity() && id.element.is_identity());
        let sw = kappa_feasible(&inst, &[1, 0, 2]).unwrap().unwrap();
        assert!(sw.b.is_identity());
        assert!(inst.normalises(&sw.element));

        let h = code_to_group(&mat(3, &[&[1, 0, 1], &[0, 1, 2]])).unwrap();
        let inst = build_instance(&h, 3).unwrap();
        for pi in [[1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]] {
            let got = kappa_feasible(&inst, &pi).unwrap();
            let brute = oracle::brute_b_for_kappa(&inst, &pi);
            assert_eq!(got.is_some(), brute.is_some(), "{pi:?}");
        }
        assert!(kappa_feasible(&inst, &[0, 1]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        pub(super) fn standard_strategy(max_s: usize, max_k: usize) -> impl Strategy<Value = FpMatrix> {
            (prop::sample::select(vec![2u32, 3, 5, 7]), 1..=max_s, 1..=max_k)
                .prop_flat_map(|(p, s, k)| {
                    let k = k.max(s);
                    prop::collection::vec(0..p, s * (k - s)).prop_map(move |data| (p, s, k, data))
                })
                .prop_map(|(p, s, k, data)| {
                    let f = PrimeField::new(p).unwrap();
                    let rows: Vec<FpVector> = (0..s)
                        .map(|i| {
                            let mut r = vec![0; k];
                            r[i] = 1;
                            r[s..].copy_from_slice(&data[i * (k - s)..(i + 1) * (k - s)]);
                            r
                        })
                        .collect();
                    FpMatrix::from_vectors(f, k, &rows)
                })
        }

        fn random_f(a: &FpMatrix, rng: &mut ChaCha8Rng) -> (FpMatrix, Vec<u32>) {
            let f = *a.field();
            let s = a.rows();
            loop {
                let rows: Vec<FpVector> = (0..s).map(|_| (0..s).map(|_| rng.gen_range(0..f.p())).collect()).collect();
                let r = FpMatrix::from_vectors(f, s, &rows);
                if r.rank() == s {
                    let d = (0..a.cols()).map(|_| rng.gen_range(1..f.p())).collect();
                    return (r, d);
                }
            }
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(128))]

            #[test]
            fn transform_is_valid(a in standard_strategy(4, 8)) {
                let c = canonical_rep(&a).unwrap();
                prop_assert_eq!(c.r_inv.mul(&a).unwrap().scale_columns(&c.d), c.rep);
            }

            #[test]
            fn invariant_under_f(a in standard_strategy(4, 8), seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let base = canonical_rep(&a).unwrap().rep;
                for _ in 0..20 {
                    let (r, d) = random_f(&a, &mut rng);
                    let moved = apply_f(&a, &r, &d).unwrap();
                    prop_assert_eq!(&canonical_rep(&moved).unwrap().rep, &base);
                }
            }

            #[test]
            fn least_in_orbit(a in standard_strategy(2, 4).prop_filter("p at most 3", |a| a.field().p() <= 3)) {
                prop_assert_eq!(canonical_rep(&a).unwrap().rep, oracle::brute_canon_rep(&a, oracle::DEFAULT_BUDGET).unwrap());
            }

            #[test]
            fn feasibility_matches_brute_force(
                a in standard_strategy(3, 3).prop_filter("p at most 3, no zero column", |a| {
                    a.field().p() <= 3 && (0..a.cols()).all(|j| a.column(j).iter().any(|&x| x != 0))
                }),
                seed in any::<u64>(),
            ) {
                use rand::seq::SliceRandom;
                let inst = build_instance(&code_to_group(&a).unwrap(), a.field().p()).unwrap();
                let mut pi: Vec<usize> = (0..inst.k()).collect();
                pi.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
                let got = kappa_feasible(&inst, &pi).unwrap();
                prop_assert_eq!(got.is_some(), oracle::brute_b_for_kappa(&inst, &pi).is_some());
                if let Some(w) = got {
                    prop_assert!(inst.normalises(&w.element));
                }
            }
        }
    }
}
