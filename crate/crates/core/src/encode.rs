//! Recognition of subdirect products of cyclic groups of prime order and the
//! translation between such groups and linear codes.
//!
//! An instance fixes, for every orbit `Ω_i`, a generator `g_i` of the orbit
//! restriction and an anchor point `a_i`. The *frame* of `Ω_i` lists
//! `a_i^{g_i^u}` for `u = 0..p`. Everything in this module is expressed in
//! frame coordinates: `γ` reads exponents, the involutions `φ̄_i` swap frames
//! position by position, and `K` consists of exactly those permutations that
//! carry frames onto frames.

use std::fmt;

use crate::error::{Error, Result};
use crate::gfp::{column_classes, dual_matrix, rref_standard, FpMatrix, FpVector, PrimeField};
use crate::perm::{PermGroup, Permutation};

/// One orbit together with its generator and anchor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// `points[u] = anchor^{g^u}`.
    points: Vec<usize>,
    gen: Permutation,
}

impl Frame {
    /// Frame of the regular cyclic action of `gen` on its support, anchored
    /// at `anchor`.
    pub fn new(gen: Permutation, anchor: usize) -> Result<Self> {
        let mut points = vec![anchor];
        let mut x = gen.image(anchor);
        while x != anchor {
            points.push(x);
            x = gen.image(x);
        }
        if points.len() != gen.support().len() {
            return Err(Error::NotInClass(format!("generator {gen} is not a single cycle through {}", anchor + 1)));
        }
        Ok(Self { points, gen })
    }

    pub fn anchor(&self) -> usize {
        self.points[0]
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn generator(&self) -> &Permutation {
        &self.gen
    }

    /// The orbit, sorted.
    pub fn orbit(&self) -> Vec<usize> {
        let mut o = self.points.clone();
        o.sort_unstable();
        o
    }

    /// The same orbit and generator with a different anchor.
    pub fn reanchored(&self, anchor: usize) -> Result<Self> {
        Frame::new(self.gen.clone(), anchor)
    }
}

/// An element `(d, π)` of the monomial group `W`. Acting on row vectors,
/// `(v·w)_{π(i)} = v_i d_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialElement {
    pub diag: Vec<u32>,
    pub perm: Vec<usize>,
}

impl MonomialElement {
    pub fn identity(k: usize) -> Self {
        Self { diag: vec![1; k], perm: (0..k).collect() }
    }

    pub fn new(diag: Vec<u32>, perm: Vec<usize>) -> Result<Self> {
        if diag.len() != perm.len() {
            return Err(Error::Dimension("diagonal and permutation lengths differ".into()));
        }
        if let Some(i) = diag.iter().position(|&x| x == 0) {
            return Err(Error::ZeroDiagonal(i));
        }
        Permutation::from_images(perm.clone())?;
        Ok(Self { diag, perm })
    }

    pub fn k(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.diag.iter().all(|&x| x == 1) && self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` then `other`.
    pub fn mul(&self, other: &MonomialElement, field: &PrimeField) -> MonomialElement {
        let diag = (0..self.k()).map(|i| field.mul(self.diag[i], other.diag[self.perm[i]])).collect();
        let perm = (0..self.k()).map(|i| other.perm[self.perm[i]]).collect();
        MonomialElement { diag, perm }
    }

    pub fn inverse(&self, field: &PrimeField) -> MonomialElement {
        let mut diag = vec![0; self.k()];
        let mut perm = vec![0; self.k()];
        for i in 0..self.k() {
            diag[self.perm[i]] = field.inv(self.diag[i]);
            perm[self.perm[i]] = i;
        }
        MonomialElement { diag, perm }
    }

    pub fn apply(&self, v: &[u32], field: &PrimeField) -> FpVector {
        let mut out = vec![0; v.len()];
        for i in 0..v.len() {
            out[self.perm[i]] = field.mul(v[i], self.diag[i]);
        }
        out
    }

    /// `M·w`: column `π(i)` of the result is `d_i` times column `i` of `M`.
    pub fn apply_matrix(&self, m: &FpMatrix) -> FpMatrix {
        let rows: Vec<FpVector> = (0..m.rows()).map(|r| self.apply(m.row(r), m.field())).collect();
        FpMatrix::from_vectors(*m.field(), m.cols(), &rows)
    }
}

impl fmt::Display for MonomialElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let perm = Permutation::from_images(self.perm.clone()).map_err(|_| fmt::Error)?;
        write!(f, "diag{:?}·{}", self.diag, perm)
    }
}

/// A recognised group in standard orbit order.
#[derive(Clone, Debug)]
pub struct InPInstance {
    field: PrimeField,
    degree: usize,
    frames: Vec<Frame>,
    /// point -> (orbit label, frame position)
    loc: Vec<Option<(usize, usize)>>,
    m: FpMatrix,
    mdual: FpMatrix,
    std_gens: Vec<Permutation>,
}

impl InPInstance {
    /// Recognises `H` and orders its orbits so that `M` is in standard form.
    pub fn from_group(h: &PermGroup, p: u32) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let n = h.degree();
        if h.is_trivial() {
            return Err(Error::NotInClass("trivial group".into()));
        }
        let mut frames = Vec::new();
        for orbit in h.orbits() {
            if orbit.len() != p as usize {
                return Err(Error::NotInClass(format!(
                    "orbit containing {} has size {}, expected {p}",
                    orbit[0] + 1,
                    orbit.len()
                )));
            }
            frames.push(cyclic_frame(h, &orbit)?);
        }
        let proto = Self::bare(field, n, frames);
        let rows = h.generators().iter().map(|g| proto.gamma(g)).collect::<Result<Vec<_>>>()?;
        Self::from_frames(field, n, proto.frames, rows)
    }

    fn bare(field: PrimeField, degree: usize, frames: Vec<Frame>) -> Self {
        let mut loc = vec![None; degree];
        for (i, f) in frames.iter().enumerate() {
            for (u, &x) in f.points.iter().enumerate() {
                loc[x] = Some((i, u));
            }
        }
        let empty = FpMatrix::zeros(field, 0, frames.len());
        Self { field, degree, frames, loc, m: empty.clone(), mdual: empty, std_gens: Vec::new() }
    }

    /// Builds the instance whose code is spanned by `rows`, given in the
    /// coordinates of `frames`. Orbit labels are reordered (pivot orbits
    /// first, otherwise keeping the given order) so that the reduced
    /// generator matrix is in standard form.
    pub fn from_frames(field: PrimeField, degree: usize, frames: Vec<Frame>, rows: Vec<FpVector>) -> Result<Self> {
        let k = frames.len();
        for f in &frames {
            if f.points.len() != field.p() as usize || f.gen.degree() != degree {
                return Err(Error::NotInClass("frame does not match the field or degree".into()));
            }
        }
        let basis = FpMatrix::from_vectors(field, k, &rows).row_space_basis();
        if basis.rows() == 0 {
            return Err(Error::ZeroMatrix);
        }
        let pivots: Vec<usize> = (0..basis.rows())
            .map(|r| basis.row(r).iter().position(|&x| x != 0).expect("basis rows are nonzero"))
            .collect();
        let mut order = pivots.clone();
        order.extend((0..k).filter(|j| !pivots.contains(j)));
        let reduced = rref_standard(&basis.select_columns(&order))?;
        debug_assert!(reduced.is_standard_form());
        let m = reduced.matrix;
        let frames: Vec<Frame> = order.iter().map(|&j| frames[j].clone()).collect();
        let mut inst = Self::bare(field, degree, frames);
        inst.mdual = dual_matrix(&m)?;
        inst.std_gens = (0..m.rows()).map(|r| inst.gamma_inv(m.row(r))).collect();
        inst.m = m;
        Ok(inst)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    /// Degree of the permutation domain.
    pub fn n(&self) -> usize {
        self.degree
    }

    /// Number of orbits.
    pub fn k(&self) -> usize {
        self.frames.len()
    }

    /// Dimension of the code; `|H| = p^s`.
    pub fn s(&self) -> usize {
        self.m.rows()
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn orbit(&self, i: usize) -> Vec<usize> {
        self.frames[i].orbit()
    }

    pub fn orbit_generator(&self, i: usize) -> &Permutation {
        &self.frames[i].gen
    }

    pub fn anchors(&self) -> Vec<usize> {
        self.frames.iter().map(|f| f.anchor()).collect()
    }

    /// Orbit label and frame position of a point, if it is moved by `H`.
    pub fn locate(&self, x: usize) -> Option<(usize, usize)> {
        self.loc[x]
    }

    /// Standard-form generator matrix of `γ(H)`.
    pub fn matrix(&self) -> &FpMatrix {
        &self.m
    }

    /// Generator matrix of the dual code.
    pub fn dual(&self) -> &FpMatrix {
        &self.mdual
    }

    /// `x_i = γ⁻¹(M_{i,*})`.
    pub fn standard_generators(&self) -> &[Permutation] {
        &self.std_gens
    }

    pub fn group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.std_gens.iter().cloned()).expect("degrees agree")
    }

    /// The enveloping group `G = ⟨g_1, …, g_k⟩`.
    pub fn enveloping_group(&self) -> PermGroup {
        PermGroup::new(self.degree, self.frames.iter().map(|f| f.gen.clone())).expect("degrees agree")
    }

    /// Exponent vector of an element of `G`.
    pub fn gamma(&self, g: &Permutation) -> Result<FpVector> {
        if g.degree() != self.degree {
            return Err(Error::NotInG);
        }
        let p = self.field.p() as usize;
        let mut v = Vec::with_capacity(self.k());
        for (i, f) in self.frames.iter().enumerate() {
            let (j, r) = self.loc[g.image(f.anchor())].ok_or(Error::NotInG)?;
            if j != i || (0..p).any(|u| g.image(f.points[u]) != f.points[(u + r) % p]) {
                return Err(Error::NotInG);
            }
            v.push(r as u32);
        }
        if (0..self.degree).any(|x| self.loc[x].is_none() && g.image(x) != x) {
            return Err(Error::NotInG);
        }
        Ok(v)
    }

    pub fn gamma_inv(&self, v: &[u32]) -> Permutation {
        assert_eq!(v.len(), self.k());
        let p = self.field.p() as usize;
        let mut images: Vec<usize> = (0..self.degree).collect();
        for (f, &r) in self.frames.iter().zip(v) {
            for u in 0..p {
                images[f.points[u]] = f.points[(u + r as usize) % p];
            }
        }
        Permutation::from_images(images).expect("frames are disjoint")
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        match self.gamma(g) {
            Ok(v) => self.code_contains(&v),
            Err(_) => false,
        }
    }

    fn code_contains(&self, v: &[u32]) -> bool {
        self.m.vec_mul(&v[..self.s()]) == v
    }

    /// Whether `x` normalises `H`, by conjugating every standard generator.
    pub fn normalises(&self, x: &Permutation) -> bool {
        x.degree() == self.degree && self.std_gens.iter().all(|g| self.contains(&g.conj(x)))
    }

    /// `π` with `Ω_i^l = Ω_{π(i)}`.
    pub fn orbit_permutation(&self, l: &Permutation) -> Result<Vec<usize>> {
        let mut pi = Vec::with_capacity(self.k());
        for f in &self.frames {
            let (j, _) = self.loc[l.image(f.anchor())].ok_or_else(|| Error::NotInL("moves an orbit off the support".into()))?;
            if f.points.iter().any(|&x| self.loc[l.image(x)].map(|(jj, _)| jj) != Some(j)) {
                return Err(Error::NotInL("does not permute the orbits".into()));
            }
            pi.push(j);
        }
        Permutation::from_images(pi.clone()).map_err(|_| Error::NotInL("orbit map is not bijective".into()))?;
        Ok(pi)
    }

    /// The element of `K` carrying frame `i` onto frame `π(i)` position by
    /// position.
    pub fn kappa(&self, pi: &[usize]) -> Permutation {
        let mut images: Vec<usize> = (0..self.degree).collect();
        for (i, f) in self.frames.iter().enumerate() {
            for (u, &x) in f.points.iter().enumerate() {
                images[x] = self.frames[pi[i]].points[u];
            }
        }
        Permutation::from_images(images).expect("orbit permutation is bijective")
    }

    /// The involution `φ̄_i` swapping frames `0` and `i`.
    pub fn phi_bar(&self, i: usize) -> Permutation {
        let mut pi: Vec<usize> = (0..self.k()).collect();
        pi.swap(0, i);
        self.kappa(&pi)
    }

    /// Generators `φ̄_2, …, φ̄_k` of `K`.
    pub fn k_generators(&self) -> Vec<Permutation> {
        (1..self.k()).map(|i| self.phi_bar(i)).collect()
    }

    /// `d` with `g_i^b = g_i^{d_i}` for an element `b` fixing every orbit.
    pub fn zeta(&self, b: &Permutation) -> Result<FpVector> {
        let p = self.field.p() as usize;
        let mut d = Vec::with_capacity(self.k());
        for (i, f) in self.frames.iter().enumerate() {
            let c = f.gen.conj(b);
            let (j, r) = self.loc[c.image(f.anchor())].ok_or_else(|| Error::NotInL("not in B".into()))?;
            if j != i || r == 0 || (0..p).any(|u| c.image(f.points[u]) != f.points[(u + r) % p]) {
                return Err(Error::NotInL(format!("does not normalise the generator of orbit {}", i + 1)));
            }
            d.push(r as u32);
        }
        Ok(d)
    }

    /// `l = b·κ` with `b` fixing every orbit and `κ ∈ K`.
    pub fn decompose_bk(&self, l: &Permutation) -> Result<(Permutation, Permutation)> {
        let pi = self.orbit_permutation(l)?;
        let kappa = self.kappa(&pi);
        let b = l.mul(&kappa.inverse());
        self.zeta(&b)?;
        Ok((b, kappa))
    }

    pub fn xi_image(&self, l: &Permutation) -> Result<MonomialElement> {
        let pi = self.orbit_permutation(l)?;
        let b = l.mul(&self.kappa(&pi).inverse());
        Ok(MonomialElement { diag: self.zeta(&b)?, perm: pi })
    }

    /// The element of `B` fixing every anchor with `g_i^σ = g_i^{d_i}`.
    pub fn scaling_element(&self, d: &[u32]) -> Result<Permutation> {
        let p = self.field.p() as usize;
        if let Some(i) = d.iter().position(|&x| x % self.field.p() == 0) {
            return Err(Error::ZeroDiagonal(i));
        }
        let mut images: Vec<usize> = (0..self.degree).collect();
        for (f, &di) in self.frames.iter().zip(d) {
            for u in 0..p {
                images[f.points[u]] = f.points[(u * di as usize) % p];
            }
        }
        Ok(Permutation::from_images(images).expect("units permute residues"))
    }

    /// `σ·κ` with `σ` from [`Self::scaling_element`].
    pub fn xi_preimage(&self, w: &MonomialElement) -> Result<Permutation> {
        if w.k() != self.k() {
            return Err(Error::Dimension("monomial element of wrong size".into()));
        }
        Permutation::from_images(w.perm.clone())?;
        Ok(self.scaling_element(&w.diag)?.mul(&self.kappa(&w.perm)))
    }

    /// The involution `frame_i[u] ↔ frame_j[a·u]`, which centralises `H`
    /// whenever column `j` of `M` is `a` times column `i`.
    pub fn psi_bar(&self, i: usize, j: usize, a: u32) -> Permutation {
        let p = self.field.p() as usize;
        let mut images: Vec<usize> = (0..self.degree).collect();
        let (fi, fj) = (&self.frames[i], &self.frames[j]);
        for u in 0..p {
            let v = (u * a as usize) % p;
            images[fi.points[u]] = fj.points[v];
            images[fj.points[v]] = fi.points[u];
        }
        Permutation::from_images(images).expect("a is a unit")
    }

    /// Classes of equivalent orbits. Each entry lists `(label, a)` with
    /// column `label` equal to `a` times the column of the first member.
    pub fn equivalence_classes(&self) -> Vec<Vec<(usize, u32)>> {
        classes_with_scalars(&self.m)
    }

    /// `C_{S_n}(H)`: the enveloping group together with the swaps `ψ̄`
    /// between the first orbit of each class and the others.
    pub fn centralizer(&self) -> PermGroup {
        let mut gens: Vec<Permutation> = self.frames.iter().map(|f| f.gen.clone()).collect();
        for class in self.equivalence_classes() {
            let first = class[0].0;
            for &(j, a) in &class[1..] {
                gens.push(self.psi_bar(first, j, a));
            }
        }
        PermGroup::new(self.degree, gens).expect("degrees agree")
    }

    /// The instance of `H^⊥ = γ⁻¹(γ(H)^⊥)` on the same frames.
    pub fn dual_instance(&self) -> Result<InPInstance> {
        Self::from_frames(self.field, self.degree, self.frames.clone(), self.mdual.row_vectors())
    }

    /// Same orbits and generators, new anchors, and therefore a different
    /// `K`. The code is unchanged.
    pub fn reanchored(&self, anchors: &[usize]) -> Result<InPInstance> {
        let frames = self
            .frames
            .iter()
            .zip(anchors)
            .map(|(f, &a)| f.reanchored(a))
            .collect::<Result<Vec<_>>>()?;
        let mut inst = Self::bare(self.field, self.degree, frames);
        inst.m = self.m.clone();
        inst.mdual = self.mdual.clone();
        inst.std_gens = self.std_gens.clone();
        Ok(inst)
    }
}

/// Column classes of `m` with the scalar relating each member to the first.
pub(crate) fn classes_with_scalars(m: &FpMatrix) -> Vec<Vec<(usize, u32)>> {
    let f = *m.field();
    let (part, _) = column_classes(m);
    part.cells()
        .iter()
        .map(|cell| {
            let first = m.column(cell[0]);
            let lead = first.iter().position(|&x| x != 0);
            cell.iter()
                .map(|&j| {
                    let a = match lead {
                        Some(r) => f.mul(m.get(r, j), f.inv(first[r])),
                        None => 1,
                    };
                    (j, a)
                })
                .collect()
        })
        .collect()
}

/// Frame of one orbit of `H`, with `g` the power of the restriction that
/// sends the orbit minimum to the second smallest point.
fn cyclic_frame(h: &PermGroup, orbit: &[usize]) -> Result<Frame> {
    let p = orbit.len();
    let restrictions: Vec<Permutation> = h
        .generators()
        .iter()
        .map(|g| g.restrict_to(orbit))
        .collect::<Result<Vec<_>>>()?;
    let c = restrictions
        .iter()
        .find(|r| !r.is_identity())
        .ok_or_else(|| Error::NotInClass("orbit with trivial restriction".into()))?;
    let frame = Frame::new(c.clone(), orbit[0])
        .map_err(|_| Error::NotInClass(format!("restriction to orbit of {} is not a {p}-cycle", orbit[0] + 1)))?;
    if frame.points.len() != p {
        return Err(Error::NotInClass(format!("restriction to orbit of {} is not a {p}-cycle", orbit[0] + 1)));
    }
    let e = frame.points.iter().position(|&x| x == orbit[1]).expect("orbit has two points");
    let g = c.pow(e as i64);
    let frame = Frame::new(g, orbit[0])?;
    for r in &restrictions {
        let u = frame.points.iter().position(|&x| x == r.image(orbit[0])).expect("orbit is invariant");
        if (0..p).any(|v| r.image(frame.points[v]) != frame.points[(v + u) % p]) {
            return Err(Error::NotInClass(format!(
                "restriction to orbit of {} is not cyclic of order {p}",
                orbit[0] + 1
            )));
        }
    }
    Ok(frame)
}

/// `InPInstance::from_group`.
pub fn build_instance(h: &PermGroup, p: u32) -> Result<InPInstance> {
    InPInstance::from_group(h, p)
}

/// `γ` of the pointwise stabiliser of the orbits in `cols`: each stabilised
/// column with a nonzero entry is cleared by one pivot row, which is then
/// dropped.
pub fn stab_matrix(m: &FpMatrix, cols: &[usize]) -> FpMatrix {
    let f = *m.field();
    let mut w = m.clone();
    let mut live: Vec<usize> = (0..m.rows()).collect();
    for &j in cols {
        let Some(pos) = live.iter().position(|&r| w.get(r, j) != 0) else {
            continue;
        };
        let r = live.remove(pos);
        let inv = f.inv(w.get(r, j));
        for &o in &live {
            let c = w.get(o, j);
            if c != 0 {
                w.add_row_multiple(o, r, f.neg(f.mul(c, inv)));
            }
        }
    }
    w.select_rows(&live)
}

/// `H = ⟨γ⁻¹(M_{i,*})⟩` with `g_i` the `i`-th block of `p` consecutive points.
pub fn code_to_group(m: &FpMatrix) -> Result<PermGroup> {
    let rank = m.rank();
    if rank < m.rows() || m.rows() == 0 {
        return Err(Error::RankDeficient { rows: m.rows(), rank });
    }
    let p = m.field().p() as usize;
    let n = p * m.cols();
    let gens = (0..m.rows()).map(|r| {
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &e) in m.row(r).iter().enumerate() {
            for u in 0..p {
                images[p * i + u] = p * i + (u + e as usize) % p;
            }
        }
        Permutation::from_images(images).expect("blocks are disjoint")
    });
    PermGroup::new(n, gens)
}

/// Group exchange format: header `p n`, then one generator per line.
pub fn parse_group_text(s: &str) -> Result<(u32, PermGroup)> {
    let mut lines = s
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line: hl, msg: format!("bad integer `{t}`") }))
        .collect::<Result<_>>()?;
    let [p, n] = nums[..] else {
        return Err(Error::Parse { line: hl, msg: "header must be `p n`".into() });
    };
    let mut gens = Vec::new();
    for (ln, line) in lines {
        let g = Permutation::parse(line, n).map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
        gens.push(g);
    }
    Ok((p as u32, PermGroup::new(n, gens)?))
}

pub fn format_group_text(p: u32, h: &PermGroup) -> String {
    let mut out = format!("{p} {}\n", h.degree());
    for g in h.generators() {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

/// The equivalent-orbit reduction: `H` restricted to one representative
/// orbit per class, relabelled onto `0..|Γ|`.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Points of `Γ` in increasing order; position = new label.
    pub gamma_points: Vec<usize>,
    /// `H|_Γ`, relabelled.
    pub h1: PermGroup,
    /// Class size of the class each point of `Γ` represents, by new label.
    pub colours: Vec<usize>,
    pub centralizer: PermGroup,
    classes: Vec<Vec<(usize, u32)>>,
    psi: Vec<Vec<Permutation>>,
    inst: InPInstance,
}

impl Reduction {
    /// True when every class is a singleton and the reduction is trivial.
    pub fn is_identity(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Embeds an element of `Sym(Γ)` permuting the representative orbits
    /// among classes of equal size.
    pub fn theta(&self, u: &Permutation) -> Result<Permutation> {
        let n = self.inst.n();
        let mut old_to_new = vec![None; n];
        for (i, &x) in self.gamma_points.iter().enumerate() {
            old_to_new[x] = Some(i);
        }
        let mut class_of_rep = vec![None; self.inst.k()];
        for (c, class) in self.classes.iter().enumerate() {
            class_of_rep[class[0].0] = Some(c);
        }
        let mut images: Vec<usize> = (0..n).collect();
        for (c, class) in self.classes.iter().enumerate() {
            for (s, &(label, _)) in class.iter().enumerate() {
                for &x in self.inst.frames[label].points() {
                    let y = self.psi[c][s].image(x);
                    let z = self.gamma_points[u.image(old_to_new[y].ok_or(Error::NotInvariant)?)];
                    let (target, _) = self.inst.locate(z).ok_or(Error::NotInvariant)?;
                    let c2 = class_of_rep[target].ok_or(Error::NotInvariant)?;
                    if self.classes[c2].len() != class.len() {
                        return Err(Error::NotInL("θ argument mixes classes of different sizes".into()));
                    }
                    images[x] = self.psi[c2][s].image(z);
                }
            }
        }
        Permutation::from_images(images)
    }
}

pub fn reduce_equivalent_orbits(inst: &InPInstance) -> Result<Reduction> {
    let classes = inst.equivalence_classes();
    let n = inst.n();
    let psi: Vec<Vec<Permutation>> = classes
        .iter()
        .map(|class| {
            let first = class[0].0;
            class
                .iter()
                .map(|&(j, a)| if j == first { Permutation::identity(n) } else { inst.psi_bar(first, j, a) })
                .collect()
        })
        .collect();
    let mut gamma_points: Vec<usize> = classes.iter().flat_map(|c| inst.orbit(c[0].0)).collect();
    gamma_points.sort_unstable();
    let mut map = vec![None; n];
    for (i, &x) in gamma_points.iter().enumerate() {
        map[x] = Some(i);
    }
    let restricted = inst
        .standard_generators()
        .iter()
        .map(|g| g.restrict_to(&gamma_points)?.relabel(&map, gamma_points.len()))
        .collect::<Result<Vec<_>>>()?;
    let h1 = PermGroup::new(gamma_points.len(), restricted)?;
    let mut colours = vec![0; gamma_points.len()];
    for class in &classes {
        for x in inst.orbit(class[0].0) {
            colours[map[x].expect("representative orbit lies in Γ")] = class.len();
        }
    }
    Ok(Reduction {
        gamma_points,
        h1,
        colours,
        centralizer: inst.centralizer(),
        classes,
        psi,
        inst: inst.clone(),
    })
}
