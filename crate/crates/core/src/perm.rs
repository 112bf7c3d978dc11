//! Permutations, generated groups and stabiliser chains.
//!
//! Points are 0-based in memory and 1-based in text. Products compose left to
//! right: `a.mul(&b)` applies `a` first, and `x.conj(&s)` is `s⁻¹ x s`.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::BadPermutation(format!("{images:?} is not a bijection")));
            }
        }
        Ok(Self { images })
    }

    /// Product of 0-based cycles on `n` points.
    pub fn from_cycles<C: AsRef<[usize]>>(n: usize, cycles: &[C]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for c in cycles {
            let c = c.as_ref();
            for (idx, &x) in c.iter().enumerate() {
                if x >= n || std::mem::replace(&mut touched[x], true) {
                    return Err(Error::BadPermutation(format!("bad cycle {c:?} on {n} points")));
                }
                images[x] = c[(idx + 1) % c.len()];
            }
        }
        Ok(Self { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` then `other`.
    pub fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&x| other.images[x]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, e: i64) -> Permutation {
        let mut base = if e < 0 { self.inverse() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `s⁻¹ · self · s`, which maps `x^s` to `(x^self)^s`.
    pub fn conj(&self, s: &Permutation) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[s.images[x]] = s.images[y];
        }
        Permutation { images }
    }

    /// Nontrivial cycles, each starting at its minimum, ordered by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut c = vec![start];
            seen[start] = true;
            let mut x = self.images[start];
            while x != start {
                seen[x] = true;
                c.push(x);
                x = self.images[x];
            }
            out.push(c);
        }
        out
    }

    pub fn order(&self) -> BigUint {
        let mut acc = BigUint::from(1u32);
        for c in self.cycles() {
            let l = BigUint::from(c.len());
            let g = gcd(&acc, &l);
            acc = acc * l / g;
        }
        acc
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] != i).collect()
    }

    pub fn smallest_moved_point(&self) -> Option<usize> {
        (0..self.degree()).find(|&i| self.images[i] != i)
    }

    pub fn fixes_set(&self, delta: &[usize]) -> bool {
        let set: HashSet<usize> = delta.iter().copied().collect();
        delta.iter().all(|&x| set.contains(&self.images[x]))
    }

    /// Agrees with `self` on `delta` and fixes everything else.
    pub fn restrict_to(&self, delta: &[usize]) -> Result<Permutation> {
        if !self.fixes_set(delta) {
            return Err(Error::NotInvariant);
        }
        let mut images: Vec<usize> = (0..self.degree()).collect();
        for &x in delta {
            images[x] = self.images[x];
        }
        Ok(Permutation { images })
    }

    /// Renames points: the result maps `map[x]` to `map[x^self]` on a domain
    /// of size `n`. Points of `self` absent from `map` must be fixed.
    pub fn relabel(&self, map: &[Option<usize>], n: usize) -> Result<Permutation> {
        let mut images: Vec<usize> = (0..n).collect();
        for (x, &y) in self.images.iter().enumerate() {
            match (map[x], map[y]) {
                (Some(a), Some(b)) => images[a] = b,
                (None, None) if x == y => {}
                _ => return Err(Error::NotInvariant),
            }
        }
        Permutation::from_images(images)
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4)` or `()`. Commas
    /// between points are accepted.
    pub fn parse_cycles(s: &str, n: usize) -> Result<Permutation> {
        let s = s.trim();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::BadPermutation(format!("expected `(` in `{s}`")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::BadPermutation(format!("unclosed cycle in `{s}`")))?;
            let body = &open[..close];
            let mut c = Vec::new();
            for tok in body.split(|ch: char| ch == ',' || ch.is_whitespace()).filter(|t| !t.is_empty()) {
                let x: usize = tok
                    .parse()
                    .map_err(|_| Error::BadPermutation(format!("bad point `{tok}`")))?;
                if x == 0 || x > n {
                    return Err(Error::BadPermutation(format!("point {x} outside 1..{n}")));
                }
                c.push(x - 1);
            }
            if c.len() > 1 {
                cycles.push(c);
            }
            rest = open[close + 1..].trim_start();
        }
        Permutation::from_cycles(n, &cycles)
    }

    /// Parses 1-based image-array form `[2,1,3]`.
    pub fn parse_images(s: &str) -> Result<Permutation> {
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .ok_or_else(|| Error::BadPermutation(format!("expected `[...]`, got `{s}`")))?;
        let images = body
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(x) if x >= 1 => Ok(x - 1),
                _ => Err(Error::BadPermutation(format!("bad image `{t}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::from_images(images)
    }

    /// Either text form, padded to degree `n`.
    pub fn parse(s: &str, n: usize) -> Result<Permutation> {
        if s.trim_start().starts_with('[') {
            let p = Permutation::parse_images(s)?;
            if p.degree() > n {
                return Err(Error::BadPermutation(format!("degree {} exceeds {n}", p.degree())));
            }
            let mut images = p.images;
            images.extend(images.len()..n);
            Ok(Permutation { images })
        } else {
            Permutation::parse_cycles(s, n)
        }
    }

    pub fn to_image_string(&self) -> String {
        let parts: Vec<String> = self.images.iter().map(|x| (x + 1).to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", pts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    let (mut a, mut b) = (a.clone(), b.clone());
    while b != BigUint::from(0u32) {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// A group given by generators. The identity is never stored as a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
}

impl PermGroup {
    pub fn new(degree: usize, gens: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let mut out: Vec<Permutation> = Vec::new();
        for g in gens {
            if g.degree() != degree {
                return Err(Error::Dimension(format!(
                    "generator of degree {} in group of degree {degree}",
                    g.degree()
                )));
            }
            if !g.is_identity() && !out.contains(&g) {
                out.push(g);
            }
        }
        Ok(Self { degree, gens: out })
    }

    pub fn trivial(degree: usize) -> Self {
        Self { degree, gens: Vec::new() }
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree > 1 {
            gens.push(Permutation::from_cycles(degree, &[[0, 1]]).unwrap());
        }
        if degree > 2 {
            let c: Vec<usize> = (0..degree).collect();
            gens.push(Permutation::from_cycles(degree, &[c]).unwrap());
        }
        Self { degree, gens }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn is_trivial(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn orbit(&self, pt: usize) -> Vec<usize> {
        orbit_under(&self.gens, pt, self.degree)
    }

    /// Orbits meeting `domain`, each sorted, ordered by minimum.
    pub fn orbits_of(&self, domain: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut sorted = domain.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::new();
        for &x in &sorted {
            if seen[x] {
                continue;
            }
            let mut o = self.orbit(x);
            for &y in &o {
                seen[y] = true;
            }
            o.sort_unstable();
            out.push(o);
        }
        out.sort_unstable_by_key(|o| o[0]);
        out
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        self.orbits_of(&(0..self.degree).collect::<Vec<_>>())
    }

    pub fn stab_chain(&self) -> StabChain {
        StabChain::new(self)
    }

    pub fn order(&self) -> BigUint {
        self.stab_chain().order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.stab_chain().contains(g)
    }

    /// All elements, by closure. Only for small groups.
    pub fn elements(&self) -> Vec<Permutation> {
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = vec![id];
        while let Some(x) = queue.pop() {
            for g in &self.gens {
                let y = x.mul(g);
                if seen.insert(y.clone()) {
                    queue.push(y);
                }
            }
        }
        let mut out: Vec<Permutation> = seen.into_iter().collect();
        out.sort();
        out
    }
}

pub(crate) fn orbit_under(gens: &[Permutation], pt: usize, n: usize) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[pt] = true;
    let mut orbit = vec![pt];
    let mut i = 0;
    while i < orbit.len() {
        let x = orbit[i];
        for g in gens {
            let y = g.image(x);
            if !seen[y] {
                seen[y] = true;
                orbit.push(y);
            }
        }
        i += 1;
    }
    orbit
}

/// `σ ∈ Sym(Δ)` with `x^σ = y`, matching cycles of equal length in order of
/// their minimal points. `Ok(None)` when the cycle types differ.
pub fn conjugacy_witness(x: &Permutation, y: &Permutation, delta: &[usize]) -> Result<Option<Permutation>> {
    if x.degree() != y.degree() {
        return Err(Error::Dimension("permutations of different degree".into()));
    }
    let n = x.degree();
    let mut inside = vec![false; n];
    for &d in delta {
        inside[d] = true;
    }
    for p in [x, y] {
        if (0..n).any(|i| !inside[i] && p.image(i) != i) || !p.fixes_set(delta) {
            return Err(Error::NotInvariant);
        }
    }
    let mut sorted = delta.to_vec();
    sorted.sort_unstable();
    let cycles_on = |p: &Permutation| {
        let mut seen = vec![false; n];
        let mut by_len: std::collections::BTreeMap<usize, Vec<Vec<usize>>> = Default::default();
        for &s in &sorted {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut t = p.image(s);
            while t != s {
                seen[t] = true;
                c.push(t);
                t = p.image(t);
            }
            by_len.entry(c.len()).or_default().push(c);
        }
        by_len
    };
    let cx = cycles_on(x);
    let cy = cycles_on(y);
    if cx.len() != cy.len() || cx.iter().zip(&cy).any(|((la, a), (lb, b))| la != lb || a.len() != b.len()) {
        return Ok(None);
    }
    let mut images: Vec<usize> = (0..n).collect();
    for (a, b) in cx.values().zip(cy.values()) {
        for (ca, cb) in a.iter().zip(b) {
            for (&u, &v) in ca.iter().zip(cb) {
                images[u] = v;
            }
        }
    }
    let sigma = Permutation { images };
    debug_assert_eq!(&x.conj(&sigma), y);
    Ok(Some(sigma))
}

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    trans: Vec<u32>,
    reps: Vec<Permutation>,
    inv: Vec<Permutation>,
    checked: HashSet<(u32, u32)>,
}

const NONE: u32 = u32::MAX;

impl Level {
    fn new(base: usize, n: usize) -> Self {
        let mut trans = vec![NONE; n];
        trans[base] = 0;
        let id = Permutation::identity(n);
        Self {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            trans,
            reps: vec![id.clone()],
            inv: vec![id],
            checked: HashSet::new(),
        }
    }

    fn add_gen(&mut self, g: Permutation) {
        self.gens.push(g);
        let mut i = 0;
        while i < self.orbit.len() {
            let x = self.orbit[i];
            let ux = self.trans[x] as usize;
            for gi in 0..self.gens.len() {
                let y = self.gens[gi].image(x);
                if self.trans[y] == NONE {
                    let u = self.reps[ux].mul(&self.gens[gi]);
                    self.trans[y] = self.reps.len() as u32;
                    self.inv.push(u.inverse());
                    self.reps.push(u);
                    self.orbit.push(y);
                }
            }
            i += 1;
        }
    }

    #[inline]
    fn in_orbit(&self, x: usize) -> bool {
        self.trans[x] != NONE
    }
}

/// Base and strong generating set built by deterministic Schreier–Sims.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(group: &PermGroup) -> Self {
        Self::with_base(group, &[])
    }

    /// Chain whose base starts with `prefix` (points may be fixed by the
    /// whole group); further base points are smallest moved points.
    pub fn with_base(group: &PermGroup, prefix: &[usize]) -> Self {
        let n = group.degree();
        let mut chain = StabChain { degree: n, levels: prefix.iter().map(|&b| Level::new(b, n)).collect() };
        for g in group.generators() {
            if chain.levels.iter().all(|l| g.image(l.base) == l.base) {
                let b = g.smallest_moved_point().expect("identity generators are filtered");
                chain.levels.push(Level::new(b, n));
            }
        }
        let bases: Vec<usize> = chain.levels.iter().map(|l| l.base).collect();
        for g in group.generators() {
            for (i, level) in chain.levels.iter_mut().enumerate() {
                if bases[..i].iter().all(|&b| g.image(b) == b) {
                    level.add_gen(g.clone());
                } else {
                    break;
                }
            }
        }
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let li = i as usize;
            let mut pos = 0;
            while pos < self.levels[li].orbit.len() {
                let delta = self.levels[li].orbit[pos];
                let mut gi = 0;
                while gi < self.levels[li].gens.len() {
                    let key = (delta as u32, gi as u32);
                    if self.levels[li].checked.contains(&key) {
                        gi += 1;
                        continue;
                    }
                    let level = &self.levels[li];
                    let s = &level.gens[gi];
                    let img = s.image(delta);
                    let h = level.reps[level.trans[delta] as usize]
                        .mul(s)
                        .mul(&level.inv[level.trans[img] as usize]);
                    if !h.is_identity() {
                        let (y, j) = self.strip(h, li + 1);
                        if j < self.levels.len() || !y.is_identity() {
                            if j == self.levels.len() {
                                let b = y.smallest_moved_point().expect("nonidentity residue");
                                self.levels.push(Level::new(b, self.degree));
                            }
                            for l in li + 1..=j {
                                self.levels[l].add_gen(y.clone());
                            }
                            i = j as isize;
                            continue 'outer;
                        }
                    }
                    self.levels[li].checked.insert(key);
                    gi += 1;
                }
                pos += 1;
            }
            i -= 1;
        }
    }

    /// Sifts from level `from`; returns the residue and the level where it
    /// stopped (`levels.len()` when it passed every level).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let d = g.image(level.base);
            if !level.in_orbit(d) {
                return (g, l);
            }
            let t = level.trans[d] as usize;
            if t != 0 {
                g = g.mul(&level.inv[t]);
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (y, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && y.is_identity()
    }

    /// Strong generators of the pointwise stabiliser of the first `level`
    /// base points.
    pub fn stabilizer_generators(&self, level: usize) -> &[Permutation] {
        self.levels.get(level).map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    /// Orbit of `pt` under the pointwise stabiliser of the first `level` base
    /// points.
    pub fn orbit_of_point(&self, pt: usize, level: usize) -> Vec<usize> {
        orbit_under(self.stabilizer_generators(level), pt, self.degree)
    }

    /// Generators of the pointwise stabiliser of `points`.
    pub fn point_stabilizer(&self, group: &PermGroup, points: &[usize]) -> PermGroup {
        let chain = StabChain::with_base(group, points);
        PermGroup::new(self.degree, chain.stabilizer_generators(points.len()).iter().cloned())
            .expect("degrees agree")
    }

    /// Whether some element maps the `i`-th base point to `images[i]` for
    /// every `i`. Positions past the end of the base are rejected.
    pub fn base_prefix_possible(&self, images: &[usize]) -> bool {
        let mut w = Permutation::identity(self.degree);
        for (i, &gamma) in images.iter().enumerate() {
            let target = w.image(gamma);
            let Some(level) = self.levels.get(i) else {
                return false;
            };
            if !level.in_orbit(target) {
                return false;
            }
            let t = level.trans[target] as usize;
            if t != 0 {
                w = w.mul(&level.inv[t]);
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(s, n).unwrap()
    }

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(n, gens.iter().map(|g| cyc(n, g))).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let g = cyc(4, "(1 2)(3 4)");
        assert_eq!(g.to_string(), "(1 2)(3 4)");
        assert_eq!(g.to_image_string(), "[2,1,4,3]");
        assert_eq!(Permutation::parse("[2,1,4,3]", 4).unwrap(), g);
        assert_eq!(cyc(3, "()").to_string(), "()");
        assert!(Permutation::parse_cycles("(1 5)", 4).is_err());
        assert!(Permutation::parse_cycles("(1 2)(2 3)", 4).is_err());
        assert!(Permutation::parse_images("[1,1]").is_err());
    }

    #[test]
    fn multiplication_is_left_to_right() {
        let a = cyc(3, "(1 2)");
        let b = cyc(3, "(2 3)");
        // 1 -> 2 -> 3
        assert_eq!(a.mul(&b).image(0), 2);
        assert_eq!(a.mul(&b), cyc(3, "(1 3 2)"));
        assert_eq!(cyc(3, "(1 2 3)").conj(&cyc(3, "(2 3)")), cyc(3, "(1 3 2)"));
        assert_eq!(cyc(5, "(1 2 3 4 5)").pow(-1), cyc(5, "(1 5 4 3 2)"));
        assert_eq!(cyc(6, "(1 2)(3 4 5)").order(), BigUint::from(6u32));
    }

    #[test]
    fn orbits_examples() {
        assert_eq!(group(4, &["(1 2)(3 4)"]).orbits(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(PermGroup::trivial(3).orbits(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(
            group(6, &["(1 2 3)(4 5 6)", "(1 2 3)"]).orbits(),
            vec![vec![0, 1, 2], vec![3, 4, 5]]
        );
        assert_eq!(group(6, &["(1 2 3)(4 5 6)"]).orbits_of(&[4]), vec![vec![3, 4, 5]]);
    }

    #[test]
    fn restrict_examples() {
        let g = cyc(4, "(1 2)(3 4)");
        assert_eq!(g.restrict_to(&[0, 1]).unwrap(), cyc(4, "(1 2)"));
        assert!(Permutation::identity(5).restrict_to(&[1, 3]).unwrap().is_identity());
        let g = cyc(6, "(1 2 3)(4 5 6)");
        assert_eq!(g.restrict_to(&[3, 4, 5]).unwrap(), cyc(6, "(4 5 6)"));
        assert!(matches!(g.restrict_to(&[0, 1]), Err(Error::NotInvariant)));
    }

    #[test]
    fn conjugacy_examples() {
        let w = conjugacy_witness(&cyc(3, "(1 2 3)"), &cyc(3, "(1 3 2)"), &[0, 1, 2]).unwrap();
        assert_eq!(w, Some(cyc(3, "(2 3)")));
        let x = cyc(4, "(1 3)");
        assert!(conjugacy_witness(&x, &x, &[0, 1, 2, 3]).unwrap().unwrap().is_identity());
        assert_eq!(conjugacy_witness(&cyc(3, "(1 2)"), &cyc(3, "(1 2 3)"), &[0, 1, 2]).unwrap(), None);
    }

    #[test]
    fn chain_examples() {
        let s3 = group(3, &["(1 2)", "(1 2 3)"]);
        let c = s3.stab_chain();
        assert_eq!(c.order(), BigUint::from(6u32));
        assert!(c.contains(&cyc(3, "(1 3)")));

        let g = group(4, &["(1 2)(3 4)"]);
        let c = g.stab_chain();
        assert_eq!(c.order(), BigUint::from(2u32));
        assert!(c.point_stabilizer(&g, &[0]).is_trivial());

        let g = group(6, &["(1 2 3)(4 5 6)"]);
        let c = g.stab_chain();
        assert_eq!(c.order(), BigUint::from(3u32));
        assert!(!c.contains(&cyc(6, "(1 2 3)")));

        assert_eq!(PermGroup::symmetric(7).order(), BigUint::from(5040u32));
        assert_eq!(PermGroup::trivial(4).order(), BigUint::from(1u32));
    }

    #[test]
    fn chain_with_base_prefix() {
        let g = group(5, &["(3 4 5)", "(4 5)"]);
        let c = StabChain::with_base(&g, &[0, 1, 2, 3, 4]);
        assert_eq!(c.base(), vec![0, 1, 2, 3, 4]);
        assert_eq!(c.order(), BigUint::from(6u32));
        assert_eq!(c.orbit_of_point(3, 3).len(), 2);
        assert!(c.base_prefix_possible(&[0, 1, 4, 2]));
        assert!(!c.base_prefix_possible(&[1]));
        assert!(!c.base_prefix_possible(&[0, 1, 2, 2]));
        assert!(c.base_prefix_possible(&[0, 1, 3, 4, 2]));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(n: usize) -> impl Strategy<Value = Permutation> {
            Just((0..n).collect::<Vec<usize>>())
                .prop_shuffle()
                .prop_map(|v| Permutation::from_images(v).unwrap())
        }

        fn group_strategy() -> impl Strategy<Value = PermGroup> {
            (2usize..=7).prop_flat_map(|n| {
                prop::collection::vec(perm_strategy(n), 1..4)
                    .prop_map(move |gens| PermGroup::new(n, gens).unwrap())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn order_matches_closure(g in group_strategy()) {
                let elements = g.elements();
                let chain = g.stab_chain();
                prop_assert_eq!(chain.order(), BigUint::from(elements.len()));
                for e in &elements {
                    prop_assert!(chain.contains(e));
                }
            }

            #[test]
            fn membership_rejects_outsiders(g in group_strategy(), x in (2usize..=7).prop_flat_map(perm_strategy)) {
                if x.degree() == g.degree() {
                    let inside = g.elements().contains(&x);
                    prop_assert_eq!(g.stab_chain().contains(&x), inside);
                }
            }

            #[test]
            fn witness_is_exact(x in perm_strategy(6), y in perm_strategy(6)) {
                let delta: Vec<usize> = (0..6).collect();
                match conjugacy_witness(&x, &y, &delta).unwrap() {
                    Some(s) => prop_assert_eq!(x.conj(&s), y),
                    None => {
                        let sym = PermGroup::symmetric(6).elements();
                        prop_assert!(sym.iter().all(|s| x.conj(s) != y));
                    }
                }
            }

            #[test]
            fn restrictions_recombine(a in perm_strategy(3), b in perm_strategy(4)) {
                let mut images: Vec<usize> = a.images().to_vec();
                images.extend(b.images().iter().map(|x| x + 3));
                let g = Permutation::from_images(images).unwrap();
                let left = g.restrict_to(&[0, 1, 2]).unwrap();
                let right = g.restrict_to(&[3, 4, 5, 6]).unwrap();
                prop_assert_eq!(left.mul(&right), g);
            }
        }
    }
}
