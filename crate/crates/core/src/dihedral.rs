//! Normalisers of subdirect products of dihedral groups `D_2p` (`p` odd) in
//! their natural action, via the Sylow split `H = H_p ⋊ H_2`.
//!
//! On every orbit the restriction of `H` is affine in frame coordinates:
//! `x ↦ σx + a` with `σ = ±1`. `H_p` is the subgroup of translations, and
//! `H_2` is a complement of reflections about a common centre `α`.

use std::time::Instant;

use crate::encode::{Frame, InPInstance};
use crate::error::{Error, Result};
use crate::gfp::{solve_left, FpMatrix, FpVector, PrimeField};
use crate::perm::{PermGroup, Permutation, StabChain};
use crate::search::{merge_stats, normalizer, search_allowed, Config, Method, NormalizerResult, Stats};

/// An element of `H` read in frame coordinates, one `(σ, a)` per orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Affine {
    neg: Vec<bool>,
    shift: FpVector,
}

#[derive(Clone, Debug)]
pub struct DihedralInstance {
    h: PermGroup,
    /// `H_p` with frames anchored at the centres `α_i`; orbit labels follow
    /// this instance.
    hp: InPInstance,
    h2: PermGroup,
    /// Pairs `Ω_{i1}`, one per orbit label.
    gamma: Vec<[usize; 2]>,
}

impl DihedralInstance {
    pub fn p(&self) -> u32 {
        self.hp.p()
    }

    pub fn k(&self) -> usize {
        self.hp.k()
    }

    pub fn n(&self) -> usize {
        self.h.degree()
    }

    pub fn group(&self) -> &PermGroup {
        &self.h
    }

    /// The Sylow `p`-subgroup as a cyclic instance.
    pub fn sylow_p(&self) -> &InPInstance {
        &self.hp
    }

    pub fn sylow_2(&self) -> &PermGroup {
        &self.h2
    }

    /// `α_i`, the point of orbit `i` fixed by `H_2`.
    pub fn alphas(&self) -> Vec<usize> {
        self.hp.anchors()
    }

    /// Points of `Γ`, orbit by orbit.
    pub fn gamma(&self) -> Vec<usize> {
        self.gamma.iter().flatten().copied().collect()
    }

    /// `H_2|_Γ` relabelled onto `0..2k`, point `2i + e` being `gamma[i][e]`.
    pub fn h2_on_gamma(&self) -> PermGroup {
        let n = self.n();
        let pts = self.gamma();
        let mut map = vec![None; n];
        for (l, &x) in pts.iter().enumerate() {
            map[x] = Some(l);
        }
        let gens = self.h2.generators().iter().map(|g| {
            g.restrict_to(&pts)
                .and_then(|r| r.relabel(&map, pts.len()))
                .expect("H_2 preserves every pair of Γ")
        });
        PermGroup::new(pts.len(), gens).expect("degrees agree")
    }

    /// `θ(g)`: the element of `K` moving orbits as `g` moves the pairs of
    /// `Γ`. `g` acts on `0..2k` as in [`Self::h2_on_gamma`].
    pub fn theta(&self, g: &Permutation) -> Result<Permutation> {
        Ok(self.hp.kappa(&self.block_permutation(g)?))
    }

    fn block_permutation(&self, g: &Permutation) -> Result<Vec<usize>> {
        let k = self.k();
        if g.degree() != 2 * k {
            return Err(Error::Dimension(format!("expected a permutation of {} points", 2 * k)));
        }
        let mut pi = vec![usize::MAX; k];
        let mut hit = vec![false; k];
        for (i, slot) in pi.iter_mut().enumerate() {
            let j = g.image(2 * i) / 2;
            if g.image(2 * i + 1) / 2 != j || hit[j] {
                return Err(Error::NotInvariant);
            }
            hit[j] = true;
            *slot = j;
        }
        Ok(pi)
    }

    /// True if `x` normalises `H`.
    pub fn normalises(&self, x: &Permutation) -> bool {
        normalises(&self.h.stab_chain(), &self.h, x)
    }
}

fn normalises(chain: &StabChain, h: &PermGroup, x: &Permutation) -> bool {
    h.generators().iter().all(|g| chain.contains(&g.conj(x)))
}

/// Reads `h` as an affine map on every frame, or `None` if it is not one.
fn affine(frames: &[Frame], loc: &[(usize, usize)], f: &PrimeField, h: &Permutation) -> Option<Affine> {
    let p = f.p();
    let mut neg = Vec::with_capacity(frames.len());
    let mut shift = Vec::with_capacity(frames.len());
    for (i, fr) in frames.iter().enumerate() {
        let pts = fr.points();
        let (i0, a) = loc[h.image(pts[0])];
        let (i1, b) = loc[h.image(pts[1])];
        if i0 != i || i1 != i {
            return None;
        }
        let step = f.sub(b as u32, a as u32);
        if step != 1 && step != p - 1 {
            return None;
        }
        for (u, &x) in pts.iter().enumerate() {
            let want = f.add(f.mul(step, u as u32), a as u32) as usize;
            if loc[h.image(x)] != (i, want) {
                return None;
            }
        }
        neg.push(step != 1);
        shift.push(a as u32);
    }
    Some(Affine { neg, shift })
}

/// A rotation generating the Sylow `p`-subgroup of `H|_Ω`.
fn rotation(h: &PermGroup, orbit: &[usize], p: u32) -> Result<Permutation> {
    let parts: Vec<Permutation> = h
        .generators()
        .iter()
        .map(|g| g.restrict_to(orbit))
        .collect::<Result<_>>()?;
    let is_cycle = |g: &Permutation| g.support().len() == p as usize && g.cycles().len() == 1;
    if let Some(g) = parts.iter().find(|g| is_cycle(g)) {
        return Ok(g.clone());
    }
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            let c = a.mul(b);
            if is_cycle(&c) {
                return Ok(c);
            }
        }
    }
    Err(Error::NotInClass(format!(
        "restriction to the orbit of {} contains no {p}-cycle among generators and their products",
        orbit[0] + 1
    )))
}

/// Recognises `H` as a subdirect product of copies of `D_2p` and splits it.
pub fn build_dihedral(h: &PermGroup, p: u32) -> Result<DihedralInstance> {
    let f = PrimeField::new(p)?;
    if p == 2 {
        return Err(Error::Unsupported("the dihedral pipeline needs an odd prime".into()));
    }
    let n = h.degree();
    let orbits = h.orbits();
    if let Some(o) = orbits.iter().find(|o| o.len() != p as usize) {
        return Err(Error::NotInClass(format!("orbit containing {} has size {}, expected {p}", o[0] + 1, o.len())));
    }
    let frames = orbits
        .iter()
        .map(|o| Frame::new(rotation(h, o, p)?, o[0]))
        .collect::<Result<Vec<_>>>()?;
    let k = frames.len();
    let mut loc = vec![(usize::MAX, 0); n];
    for (i, fr) in frames.iter().enumerate() {
        for (u, &x) in fr.points().iter().enumerate() {
            loc[x] = (i, u);
        }
    }
    let read = |g: &Permutation| {
        affine(&frames, &loc, &f, g)
            .ok_or_else(|| Error::NotInClass(format!("{g} does not act as a dihedral element on every orbit")))
    };
    let elems: Vec<Affine> = h.generators().iter().map(read).collect::<Result<_>>()?;
    for i in 0..k {
        if !elems.iter().any(|e| e.neg[i]) {
            return Err(Error::NotInClass(format!(
                "restriction to the orbit of {} is cyclic",
                frames[i].anchor() + 1
            )));
        }
    }

    // Split generators by their reflection pattern over F_2: a basis, and
    // for the rest the basis elements with the same pattern.
    let mut reduced: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    let mut basis: Vec<usize> = Vec::new();
    let mut translations: Vec<FpVector> = Vec::new();
    let gens = h.generators();
    for (j, e) in elems.iter().enumerate() {
        let mut v = e.neg.clone();
        let mut combo: Vec<usize> = Vec::new();
        for (bv, bc) in &reduced {
            let lead = bv.iter().position(|&x| x).expect("basis vectors are nonzero");
            if v[lead] {
                v.iter_mut().zip(bv).for_each(|(x, &y)| *x ^= y);
                for &c in bc {
                    match combo.iter().position(|&x| x == c) {
                        Some(pos) => {
                            combo.remove(pos);
                        }
                        None => combo.push(c),
                    }
                }
            }
        }
        if v.iter().any(|&x| x) {
            combo.push(j);
            reduced.push((v, combo));
            basis.push(j);
        } else {
            let mut w = gens[j].clone();
            for &c in &combo {
                w = w.mul(&gens[c]);
            }
            translations.push(read(&w)?.shift);
        }
    }
    for (x, &a) in basis.iter().enumerate() {
        translations.push(read(&gens[a].mul(&gens[a]))?.shift);
        for &b in &basis[x + 1..] {
            let (ga, gb) = (&gens[a], &gens[b]);
            let comm = ga.inverse().mul(&gb.inverse()).mul(ga).mul(gb);
            translations.push(read(&comm)?.shift);
        }
    }
    let a_basis = invariant_closure(&f, k, translations, basis.iter().map(|&j| &elems[j].neg));
    if a_basis.rows() == 0 {
        return Err(Error::NotInClass("no rotations".into()));
    }

    let centre = solve_centre(&f, &a_basis, basis.iter().map(|&j| &elems[j]))?;
    let frames = frames
        .iter()
        .zip(&centre)
        .map(|(fr, &c)| fr.reanchored(fr.points()[c as usize]))
        .collect::<Result<Vec<_>>>()?;
    let hp = InPInstance::from_frames(f, n, frames, a_basis.row_vectors())?;

    let chain = h.stab_chain();
    let mut h2_gens = Vec::new();
    for &j in &basis {
        let mut images: Vec<usize> = (0..n).collect();
        for fr in hp.frames() {
            let pts = fr.points();
            let neg = elems[j].neg[loc[pts[0]].0];
            for (u, &x) in pts.iter().enumerate() {
                images[x] = if neg { pts[(p as usize - u) % p as usize] } else { x };
            }
        }
        let r = Permutation::from_images(images)?;
        if !chain.contains(&r) {
            return Err(Error::NotInClass("no complement of reflections about common centres".into()));
        }
        h2_gens.push(r);
    }
    let h2 = PermGroup::new(n, h2_gens)?;

    let first = hp.frames()[0].points();
    let pick = (1..p as usize).min_by_key(|&u| first[u]).expect("p > 2");
    let gamma = hp
        .frames()
        .iter()
        .map(|fr| [fr.points()[pick], fr.points()[p as usize - pick]])
        .collect();
    Ok(DihedralInstance { h: h.clone(), hp, h2, gamma })
}

/// Smallest subspace containing `vs` and closed under negating the
/// coordinates flagged in each pattern.
fn invariant_closure<'a>(
    f: &PrimeField,
    k: usize,
    vs: Vec<FpVector>,
    patterns: impl Iterator<Item = &'a Vec<bool>>,
) -> FpMatrix {
    let patterns: Vec<&Vec<bool>> = patterns.collect();
    let mut span = FpMatrix::from_vectors(*f, k, &vs).row_space_basis();
    loop {
        let mut rows = span.row_vectors();
        for v in span.row_vectors() {
            for pat in &patterns {
                rows.push(v.iter().zip(pat.iter()).map(|(&x, &n)| if n { f.neg(x) } else { x }).collect());
            }
        }
        let next = FpMatrix::from_vectors(*f, k, &rows).row_space_basis();
        if next.rows() == span.rows() {
            return span;
        }
        span = next;
    }
}

/// Centres `c` such that each basis reflection, corrected by a translation
/// in `H_p`, becomes `x ↦ σx + (1−σ)c`.
fn solve_centre<'a>(f: &PrimeField, a: &FpMatrix, refl: impl Iterator<Item = &'a Affine>) -> Result<FpVector> {
    let refl: Vec<&Affine> = refl.collect();
    let (k, d, r) = (a.cols(), a.rows(), refl.len());
    // unknowns: c (k), then λ_{j,l} (r·d); equations indexed (j, i)
    let mut sys = FpMatrix::zeros(*f, k + r * d, r * k);
    let mut rhs = vec![0u32; r * k];
    for (j, e) in refl.iter().enumerate() {
        for i in 0..k {
            let col = j * k + i;
            if e.neg[i] {
                sys.set(i, col, f.neg(2 % f.p()));
            }
            for l in 0..d {
                sys.set(k + j * d + l, col, a.get(l, i));
            }
            rhs[col] = f.neg(e.shift[i]);
        }
    }
    let z = solve_left(&sys, &rhs)?
        .ok_or_else(|| Error::NotInClass("reflections have no common centre modulo H_p".into()))?;
    Ok(z[..k].to_vec())
}

/// `N_{S_n}(H) = I·H`, with `I` recovered from `N_R(H_p)` through `Ξ`.
pub fn normalizer_dihedral(inst: &DihedralInstance, config: &Config) -> Result<NormalizerResult> {
    let start = Instant::now();
    let mut stats = Stats::default();
    let n2 = normalizer(&inst.h2_on_gamma(), 2, config)?;
    merge_stats(&mut stats, &n2.stats);
    let k = inst.k();
    let images = n2
        .generators
        .iter()
        .map(|g| inst.block_permutation(g).and_then(Permutation::from_images))
        .collect::<Result<Vec<_>>>()?;
    let allowed = PermGroup::new(k, images)?;

    let mut cfg = config.clone();
    if cfg.method == Method::LimitDepth && crate::search::ColumnIndex::new(&inst.hp).is_none() {
        cfg.method = Method::Full;
    }
    if let Some(t) = config.timeout {
        cfg.timeout = Some(t.saturating_sub(start.elapsed()));
    }
    let nr = search_allowed(&inst.hp, Some(&allowed), &cfg)?;
    merge_stats(&mut stats, &nr.stats);

    let mut gens: Vec<Permutation> = Vec::new();
    for r in &nr.generators {
        let tau = inst.hp.xi_preimage(&inst.hp.xi_image(r)?)?;
        if !tau.is_identity() && !gens.contains(&tau) {
            gens.push(tau);
        }
    }
    gens.extend(inst.h.generators().iter().cloned());
    let chain = inst.h.stab_chain();
    if let Some(bad) = gens.iter().find(|g| !normalises(&chain, &inst.h, g)) {
        return Err(Error::NotInL(format!("{bad} does not normalise the group")));
    }
    let group = PermGroup::new(inst.n(), gens)?;
    stats.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(NormalizerResult {
        degree: inst.n(),
        order: group.order(),
        generators: group.generators().to_vec(),
        stats,
        timed_out: n2.timed_out || nr.timed_out,
    })
}

/// `H = ⟨C_p part, C_2 part⟩` on blocks of `p` consecutive points: rows of
/// `cp` act as rotations, rows of `c2` as reflections fixing each block's
/// first point.
pub fn dihedral_group(cp: &FpMatrix, c2: &FpMatrix) -> Result<PermGroup> {
    let p = cp.field().p() as usize;
    if c2.field().p() != 2 || cp.cols() != c2.cols() {
        return Err(Error::Dimension("reflection pattern must be a binary matrix with one column per block".into()));
    }
    let rot = crate::encode::code_to_group(cp)?;
    let n = rot.degree();
    let mut gens = rot.generators().to_vec();
    for r in 0..c2.rows() {
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &e) in c2.row(r).iter().enumerate() {
            if e == 1 {
                for u in 0..p {
                    images[p * i + u] = p * i + (p - u) % p;
                }
            }
        }
        gens.push(Permutation::from_images(images)?);
    }
    PermGroup::new(n, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_normalizer, DEFAULT_BUDGET};
    use num_bigint::BigUint;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(n, gens.iter().map(|g| Permutation::parse(g, n).unwrap())).unwrap()
    }

    fn check_split(inst: &DihedralInstance) {
        let h = inst.group();
        let hp = inst.sylow_p().group();
        assert_eq!(h.order(), hp.order() * inst.sylow_2().order());
        let chain = h.stab_chain();
        let hp_chain = hp.stab_chain();
        for g in hp.generators().iter().chain(inst.sylow_2().generators()) {
            assert!(chain.contains(g));
        }
        for g in h.generators() {
            for x in hp.generators() {
                assert!(hp_chain.contains(&x.conj(g)));
            }
        }
        for (r, a) in inst.sylow_2().generators().iter().zip(std::iter::repeat(inst.alphas())) {
            assert!(a.iter().all(|&x| r.image(x) == x));
        }
        assert!(inst.sylow_2().generators().iter().all(|r| !hp_chain.contains(r)));
    }

    #[test]
    fn diagonal_d6() {
        let h = group(6, &["(1 2 3)(4 5 6)", "(2 3)(5 6)"]);
        let inst = build_dihedral(&h, 3).unwrap();
        check_split(&inst);
        assert_eq!(inst.sylow_p().group().order(), BigUint::from(3u32));
        assert!(inst.sylow_p().contains(&Permutation::parse("(1 2 3)(4 5 6)", 6).unwrap()));
        assert_eq!(inst.sylow_2().order(), BigUint::from(2u32));
        let n = normalizer_dihedral(&inst, &Config::default()).unwrap();
        assert_eq!(n.order, brute_normalizer(&h, DEFAULT_BUDGET).unwrap().order());
    }

    #[test]
    fn single_orbit() {
        let h = group(3, &["(1 2 3)", "(2 3)"]);
        let inst = build_dihedral(&h, 3).unwrap();
        check_split(&inst);
        assert_eq!(inst.alphas(), vec![0]);
        assert_eq!(inst.sylow_2().generators(), &[Permutation::parse("(2 3)", 3).unwrap()]);
        let n = normalizer_dihedral(&inst, &Config::default()).unwrap();
        assert_eq!(n.order, BigUint::from(6u32));
    }

    #[test]
    fn rejects_non_dihedral() {
        let cyclic = group(6, &["(1 2 3)(4 5 6)"]);
        assert!(matches!(build_dihedral(&cyclic, 3), Err(Error::NotInClass(_))));
        let s4 = group(4, &["(1 2 3 4)", "(1 2)"]);
        assert!(build_dihedral(&s4, 3).is_err());
        assert!(build_dihedral(&group(2, &["(1 2)"]), 2).is_err());
    }

    #[test]
    fn theta_examples() {
        let h = group(6, &["(1 2 3)(4 5 6)", "(2 3)(5 6)"]);
        let inst = build_dihedral(&h, 3).unwrap();
        assert!(inst.theta(&Permutation::identity(4)).unwrap().is_identity());
        let swap = Permutation::parse("(1 3)(2 4)", 4).unwrap();
        let t = inst.theta(&swap).unwrap();
        assert_eq!(inst.sylow_p().orbit_permutation(&t).unwrap(), vec![1, 0]);
        let h2_chain = inst.sylow_2().stab_chain();
        for g in inst.h2_on_gamma().generators().iter().chain([&swap]) {
            let t = inst.theta(g).unwrap();
            assert!(inst.sylow_2().generators().iter().all(|r| h2_chain.contains(&r.conj(&t))));
        }
        assert!(inst.theta(&Permutation::parse("(2 3)", 4).unwrap()).is_err());
    }

    #[test]
    fn generated_instances_match_brute_force() {
        let f3 = PrimeField::new(3).unwrap();
        let f2 = PrimeField::new(2).unwrap();
        let cases: &[(&[&[i64]], &[&[i64]])] = &[
            (&[&[1, 0], &[0, 1]], &[&[1, 1]]),
            (&[&[1, 1]], &[&[1, 0], &[0, 1]]),
            (&[&[1, 2]], &[&[1, 1]]),
            (&[&[1, 0], &[0, 1]], &[&[1, 0], &[0, 1]]),
        ];
        for (cp, c2) in cases {
            let h = dihedral_group(&FpMatrix::from_rows(f3, cp).unwrap(), &FpMatrix::from_rows(f2, c2).unwrap()).unwrap();
            let inst = build_dihedral(&h, 3).unwrap();
            check_split(&inst);
            let n = normalizer_dihedral(&inst, &Config::default()).unwrap();
            assert_eq!(n.order, brute_normalizer(&h, DEFAULT_BUDGET).unwrap().order(), "{cp:?} {c2:?}");
        }
    }

    #[test]
    fn relabelled_input() {
        // centres not at the smallest points, rotations given as products
        let h = group(6, &["(1 2)(4 6)", "(1 3)(5 6)"]);
        let inst = build_dihedral(&h, 3).unwrap();
        check_split(&inst);
        let n = normalizer_dihedral(&inst, &Config::default()).unwrap();
        assert_eq!(n.order, brute_normalizer(&h, DEFAULT_BUDGET).unwrap().order());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn full_rank(p: u32, k: usize, data: Vec<u32>) -> Option<FpMatrix> {
            let f = PrimeField::new(p).unwrap();
            let rows: Vec<FpVector> = data.chunks(k).map(|c| c.to_vec()).collect();
            let m = FpMatrix::from_vectors(f, k, &rows);
            let ok = m.rank() == m.rows() && (0..k).all(|j| m.column(j).iter().any(|&x| x != 0));
            ok.then_some(m)
        }

        fn instance(primes: Vec<u32>, max_k: usize) -> impl Strategy<Value = PermGroup> {
            (prop::sample::select(primes), 1..=max_k)
                .prop_flat_map(|(p, k)| (Just(p), Just(k), 1..=k, 1..=k))
                .prop_flat_map(|(p, k, s, t)| {
                    (Just(p), Just(k), prop::collection::vec(0..p, s * k), prop::collection::vec(0..2u32, t * k))
                })
                .prop_filter_map("full rank, no zero column", |(p, k, a, b)| {
                    dihedral_group(&full_rank(p, k, a)?, &full_rank(2, k, b)?).ok()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn small_instances_match_brute_force(h in instance(vec![3], 3)) {
                let inst = build_dihedral(&h, 3).unwrap();
                check_split(&inst);
                let n = normalizer_dihedral(&inst, &Config::default()).unwrap();
                prop_assert_eq!(n.order, brute_normalizer(&h, DEFAULT_BUDGET).unwrap().order());
            }

            #[test]
            fn split_and_generators(h in instance(vec![3, 5, 7], 6)) {
                let p = (h.orbits()[0].len()) as u32;
                let inst = build_dihedral(&h, p).unwrap();
                check_split(&inst);
                let n = normalizer_dihedral(&inst, &Config::default()).unwrap();
                prop_assert!(n.generators.iter().all(|g| inst.normalises(g)));
                prop_assert_eq!(&n.order % h.order(), BigUint::from(0u32));
            }
        }
    }
}
