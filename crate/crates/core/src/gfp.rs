//! Exact arithmetic over prime fields and the dense matrix / linear code
//! primitives the rest of the crate is built on.
//!
//! Entries are always stored as canonical residues `0..p`. Row and column
//! indices are 0-based internally; the text format is the only place where
//! dimensions are written out.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default number of codewords `weight_enumerator` is allowed to visit.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 20;

/// The field F_p together with a fixed primitive element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
    primitive: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > (1 << 16) {
            return Err(Error::Unsupported(format!("prime {p} too large")));
        }
        let primitive = smallest_primitive_root(p);
        Ok(Self { p, primitive })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    /// Smallest positive generator of F_p^*.
    #[inline]
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, (self.p - 2) as u64)
    }

    /// Iterator over F_p^*.
    pub fn units(&self) -> impl Iterator<Item = u32> {
        1..self.p
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn smallest_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let field = PrimeField { p, primitive: 0 };
    let order = p - 1;
    let mut factors = Vec::new();
    let mut m = order;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| field.pow(g, (order / q) as u64) != 1))
        .expect("every prime field has a primitive root")
}

/// A vector over F_p. Plain residues; the field is carried by whoever owns it.
pub type FpVector = Vec<u32>;

/// Hamming weight.
pub fn weight(v: &[u32]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Scales `v` so that its first nonzero entry is 1. Zero stays zero.
pub fn normalise(field: &PrimeField, v: &[u32]) -> FpVector {
    match v.iter().find(|&&x| x != 0) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = field.inv(lead);
            v.iter().map(|&x| field.mul(x, inv)).collect()
        }
    }
}

/// Dense `rows × cols` matrix over F_p, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows of integers, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[i64]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&x| field.reduce(x)));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from residue rows that are already reduced.
    pub fn from_vectors(field: PrimeField, cols: usize, rows: &[FpVector]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            debug_assert!(r.iter().all(|&x| x < field.p()));
            data.extend_from_slice(r);
        }
        Self {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        debug_assert!(x < self.field.p());
        self.data[i * self.cols + j] = x;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> FpVector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn row_vectors(&self) -> Vec<FpVector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, coeffs: &[u32]) -> FpVector {
        assert_eq!(coeffs.len(), self.rows);
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        out
    }

    pub fn scale_row(&mut self, i: usize, c: u32) {
        let f = self.field;
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = f.mul(*x, c);
        }
    }

    pub fn scale_column(&mut self, j: usize, c: u32) {
        for i in 0..self.rows {
            let v = self.field.mul(self.get(i, j), c);
            self.set(i, j, v);
        }
    }

    /// `row[dst] += c * row[src]`
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field;
        for j in 0..self.cols {
            let v = f.add(self.get(dst, j), f.mul(c, self.get(src, j)));
            self.set(dst, j, v);
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Columns taken in the given order.
    pub fn select_columns(&self, order: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, order.len());
        for i in 0..self.rows {
            for (jj, &j) in order.iter().enumerate() {
                out.set(i, jj, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, keep: &[usize]) -> Self {
        let rows: Vec<FpVector> = keep.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_vectors(self.field, self.cols, &rows)
    }

    /// Multiplies column `j` by `d[j]`.
    pub fn scale_columns(&self, d: &[u32]) -> Self {
        assert_eq!(d.len(), self.cols);
        let mut out = self.clone();
        for (j, &c) in d.iter().enumerate() {
            out.scale_column(j, c);
        }
        out
    }

    /// True when the first `rows` columns form the identity.
    pub fn is_standard_form(&self) -> bool {
        self.rows <= self.cols
            && (0..self.rows).all(|i| (0..self.rows).all(|j| self.get(i, j) == (i == j) as u32))
    }

    pub fn rank(&self) -> usize {
        echelon(self).pivots.len()
    }

    /// Reduced row echelon form with zero rows dropped. Never fails; used
    /// wherever a basis of the row space is wanted from an arbitrary list.
    pub fn row_space_basis(&self) -> FpMatrix {
        let e = echelon(self);
        let r = e.pivots.len();
        e.matrix.select_rows(&(0..r).collect::<Vec<_>>())
    }

    /// True when both matrices span the same row space.
    pub fn same_row_space(&self, other: &FpMatrix) -> bool {
        self.cols == other.cols && self.row_space_basis() == other.row_space_basis()
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix(p={}, {}x{}) [", self.field.p(), self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Text format: a header `p s k`, then `s` lines of `k` residues.
impl fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.field.p(), self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for FpMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 1, msg: "missing header".into() })?;
        let nums: Vec<u64> = parse_numbers(header, hl)?;
        if nums.len() != 3 {
            return Err(Error::Parse { line: hl, msg: "header must be `p s k`".into() });
        }
        let field = PrimeField::new(nums[0] as u32)?;
        let (s, k) = (nums[1] as usize, nums[2] as usize);
        let mut rows = Vec::with_capacity(s);
        for (ln, line) in lines.by_ref().take(s) {
            let r = parse_numbers(line, ln)?;
            if r.len() != k {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("expected {k} entries, found {}", r.len()),
                });
            }
            if let Some(bad) = r.iter().find(|&&x| x >= field.p() as u64) {
                return Err(Error::Parse { line: ln, msg: format!("entry {bad} is not a residue") });
            }
            rows.push(r.into_iter().map(|x| x as u32).collect::<FpVector>());
        }
        if rows.len() != s {
            return Err(Error::Parse { line: hl, msg: format!("expected {s} rows, found {}", rows.len()) });
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, msg: "trailing data after matrix".into() });
        }
        Ok(FpMatrix::from_vectors(field, k, &rows))
    }
}

fn parse_numbers(line: &str, ln: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse { line: ln, msg: format!("bad integer `{t}`") })
        })
        .collect()
}

struct Echelon {
    matrix: FpMatrix,
    pivots: Vec<usize>,
    transform: FpMatrix,
}

/// Gauss-Jordan elimination tracking the row transform `T` with `T·M = RREF`.
fn echelon(m: &FpMatrix) -> Echelon {
    let f = m.field;
    let mut a = m.clone();
    let mut t = FpMatrix::identity(f, m.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| a.get(i, c) != 0) else {
            continue;
        };
        a.swap_rows(r, pr);
        t.swap_rows(r, pr);
        let inv = f.inv(a.get(r, c));
        a.scale_row(r, inv);
        t.scale_row(r, inv);
        for i in 0..m.rows {
            if i != r {
                let c2 = a.get(i, c);
                if c2 != 0 {
                    let neg = f.neg(c2);
                    a.add_row_multiple(i, r, neg);
                    t.add_row_multiple(i, r, neg);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon { matrix: a, pivots, transform: t }
}

/// Result of [`rref_standard`].
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub transform: FpMatrix,
}

impl Rref {
    pub fn is_standard_form(&self) -> bool {
        self.pivots.iter().enumerate().all(|(i, &c)| i == c)
    }

    /// Coefficients expressing `v` in the reduced basis, or `None` when `v`
    /// lies outside the row space. Works for any pivot pattern.
    pub fn coefficients(&self, v: &[u32]) -> Option<FpVector> {
        let c: FpVector = self.pivots.iter().map(|&j| v[j]).collect();
        (self.matrix.vec_mul(&c) == v).then_some(c)
    }
}

/// Reduced row-echelon form of a full-rank generator matrix.
pub fn rref_standard(m: &FpMatrix) -> Result<Rref> {
    if m.rows == 0 || m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let e = echelon(m);
    if e.pivots.len() < m.rows {
        return Err(Error::RankDeficient { rows: m.rows, rank: e.pivots.len() });
    }
    Ok(Rref { matrix: e.matrix, pivots: e.pivots, transform: e.transform })
}

/// Some `z` with `z·c = v`, or `None` when `v` is outside the row space.
pub fn solve_left(c: &FpMatrix, v: &[u32]) -> Result<Option<FpVector>> {
    if v.len() != c.cols {
        return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), c.cols)));
    }
    let e = echelon(c);
    let coeffs: FpVector = e.pivots.iter().map(|&j| v[j]).collect();
    let r = e.pivots.len();
    let reduced = e.matrix.select_rows(&(0..r).collect::<Vec<_>>());
    if reduced.vec_mul(&coeffs) != v {
        return Ok(None);
    }
    let t = e.transform.select_rows(&(0..r).collect::<Vec<_>>());
    Ok(Some(t.vec_mul(&coeffs)))
}

/// Generator matrix of the dual code, `(-M0^T | I)`, for `M = (I | M0)`.
pub fn dual_matrix(mstd: &FpMatrix) -> Result<FpMatrix> {
    if !mstd.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let f = *mstd.field();
    let (s, k) = (mstd.rows(), mstd.cols());
    let mut out = FpMatrix::zeros(f, k - s, k);
    for r in 0..k - s {
        for i in 0..s {
            out.set(r, i, f.neg(mstd.get(i, s + r)));
        }
        out.set(r, s + r, 1);
    }
    Ok(out)
}

/// Coefficients `c` with `c·M = v` when `v` is a codeword of the standard-form
/// matrix `M`; these are exactly the first `s` coordinates of `v`.
pub fn member_row_space(v: &[u32], mstd: &FpMatrix) -> Result<Option<FpVector>> {
    if v.len() != mstd.cols() {
        return Err(Error::Dimension(format!(
            "vector of length {} against code of length {}",
            v.len(),
            mstd.cols()
        )));
    }
    if !mstd.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let c = v[..mstd.rows()].to_vec();
    Ok((mstd.vec_mul(&c) == v).then_some(c))
}

/// A set partition of `0..m`, kept canonical: cells sorted internally and
/// ordered by their minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
}

impl Partition {
    pub fn discrete(m: usize) -> Self {
        Self { cells: (0..m).map(|i| vec![i]).collect() }
    }

    pub fn from_cells(mut cells: Vec<Vec<usize>>) -> Self {
        for c in &mut cells {
            c.sort_unstable();
        }
        cells.retain(|c| !c.is_empty());
        cells.sort_unstable_by_key(|c| c[0]);
        Self { cells }
    }

    /// Groups `0..labels.len()` by equal label.
    pub fn from_labels<T: Eq + std::hash::Hash>(labels: &[T]) -> Self {
        let mut index: HashMap<&T, usize> = HashMap::new();
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let c = *index.entry(l).or_insert_with(|| {
                cells.push(Vec::new());
                cells.len() - 1
            });
            cells[c].push(i);
        }
        Self::from_cells(cells)
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let m = self.cells.iter().map(|c| c.len()).sum();
        let mut out = vec![0; m];
        for (ci, c) in self.cells.iter().enumerate() {
            for &x in c {
                out[x] = ci;
            }
        }
        out
    }

    pub fn cell_of(&self, x: usize) -> &[usize] {
        self.cells.iter().find(|c| c.contains(&x)).expect("element outside partition")
    }

    /// Common refinement.
    pub fn meet(&self, other: &Partition) -> Partition {
        let a = self.labels();
        let b = other.labels();
        let pairs: Vec<(usize, usize)> = a.into_iter().zip(b).collect();
        Partition::from_labels(&pairs)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self
            .cells
            .iter()
            .map(|c| {
                let pts: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
                format!("{{{}}}", pts.join(","))
            })
            .collect();
        write!(f, "{{{}}}", cells.join(","))
    }
}

/// Orbit equivalence on the columns of `m`: columns fall in the same cell iff
/// they agree after scaling their first nonzero entry to 1.
pub fn column_equiv_classes(m: &FpMatrix) -> Result<Partition> {
    if let Some(j) = (0..m.cols()).find(|&j| m.column(j).iter().all(|&x| x == 0)) {
        return Err(Error::ZeroColumn(j));
    }
    Ok(column_classes(m).0)
}

/// Like [`column_equiv_classes`] but tolerant of zero columns, which are put
/// in one class of their own. Returns the partition and, per column, the size
/// of its class.
pub fn column_classes(m: &FpMatrix) -> (Partition, Vec<usize>) {
    let f = *m.field();
    let keys: Vec<FpVector> = (0..m.cols()).map(|j| normalise(&f, &m.column(j))).collect();
    let part = Partition::from_labels(&keys);
    let mut sizes = vec![0; m.cols()];
    for c in part.cells() {
        for &x in c {
            sizes[x] = c.len();
        }
    }
    (part, sizes)
}

/// Nonzero codewords of minimum weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeight {
    pub weight: usize,
    pub vectors: Vec<FpVector>,
}

impl MinWeight {
    /// Number of minimum-weight codewords nonzero in each coordinate.
    pub fn incidence(&self, k: usize) -> Vec<usize> {
        let mut counts = vec![0; k];
        for v in &self.vectors {
            for (c, &x) in counts.iter_mut().zip(v) {
                if x != 0 {
                    *c += 1;
                }
            }
        }
        counts
    }
}

/// All minimum-weight codewords of a standard-form generator matrix.
///
/// Combinations of `i` rows with nonzero coefficients have weight at least
/// `i`, so only combinations of up to the current best weight are visited.
/// Combinations are enumerated with leading coefficient 1 and expanded by
/// scalars at the end.
pub fn min_weight_vectors(mstd: &FpMatrix) -> Result<MinWeight> {
    if !mstd.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let f = *mstd.field();
    let (s, k) = (mstd.rows(), mstd.cols());
    if s == 0 {
        return Err(Error::ZeroMatrix);
    }
    let mut best = usize::MAX;
    let mut found: Vec<FpVector> = Vec::new();
    let consider = |v: FpVector, best: &mut usize, found: &mut Vec<FpVector>| {
        let w = weight(&v);
        if w < *best {
            *best = w;
            found.clear();
        }
        if w == *best {
            found.push(v);
        }
    };
    let mut size = 1;
    while size <= s && size <= best {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            // coefficient digits for rows subset[1..], each in 1..p; subset[0] gets 1
            let mut digits = vec![1u32; size];
            loop {
                let mut v = vec![0u32; k];
                for (&r, &c) in subset.iter().zip(&digits) {
                    for (o, &x) in v.iter_mut().zip(mstd.row(r)) {
                        *o = f.add(*o, f.mul(c, x));
                    }
                }
                consider(v, &mut best, &mut found);
                // advance digits[1..]
                let mut pos = 1;
                while pos < size {
                    digits[pos] += 1;
                    if digits[pos] < f.p() {
                        break;
                    }
                    digits[pos] = 1;
                    pos += 1;
                }
                if pos >= size {
                    break;
                }
            }
            if !next_combination(&mut subset, s) {
                break;
            }
        }
        size += 1;
    }
    let mut vectors = Vec::with_capacity(found.len() * (f.p() as usize - 1));
    for v in &found {
        for c in f.units() {
            vectors.push(v.iter().map(|&x| f.mul(c, x)).collect());
        }
    }
    vectors.sort();
    vectors.dedup();
    Ok(MinWeight { weight: best, vectors })
}

/// Advances a sorted `r`-subset of `0..n` to the next in lexicographic order.
pub(crate) fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let r = subset.len();
    let mut i = r;
    while i > 0 {
        i -= 1;
        if subset[i] < n - r + i {
            subset[i] += 1;
            for j in i + 1..r {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Counts `w_1..w_k` of nonzero codewords by weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightEnumerator {
    counts: Vec<u64>,
}

impl WeightEnumerator {
    /// Number of codewords of weight `i` (1-based, `1..=k`).
    pub fn w(&self, i: usize) -> u64 {
        self.counts[i - 1]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Full enumeration of the code spanned by the rows of `m` (any basis).
/// Refuses with [`Error::BudgetExceeded`] when `p^rows` exceeds `budget`.
pub fn weight_enumerator(m: &FpMatrix, budget: u64) -> Result<WeightEnumerator> {
    let f = *m.field();
    let (s, k) = (m.rows(), m.cols());
    let total = (f.p() as u64).checked_pow(s as u32).unwrap_or(u64::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let mut counts = vec![0u64; k];
    if s == 0 {
        return Ok(WeightEnumerator { counts });
    }
    // p-ary counter; every digit that changes moves by +1 mod p, so each
    // change adds one copy of the corresponding row.
    let mut digits = vec![0u32; s];
    let mut v = vec![0u32; k];
    let mut w = 0usize;
    for _ in 1..total {
        let mut pos = 0;
        loop {
            for (o, &x) in v.iter_mut().zip(m.row(pos)) {
                if x != 0 {
                    let before = *o != 0;
                    *o = f.add(*o, x);
                    let after = *o != 0;
                    if before && !after {
                        w -= 1;
                    } else if !before && after {
                        w += 1;
                    }
                }
            }
            digits[pos] += 1;
            if digits[pos] < f.p() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if w > 0 {
            counts[w - 1] += 1;
        }
    }
    Ok(WeightEnumerator { counts })
}

/// Column-by-column order: at the first differing column, compare the columns
/// read bottom-up lexicographically.
pub fn prec_compare(a: &FpMatrix, b: &FpMatrix) -> Result<Ordering> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Dimension(format!(
            "comparing {}x{} with {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    for j in 0..a.cols() {
        for i in (0..a.rows()).rev() {
            match a.get(i, j).cmp(&b.get(i, j)) {
                Ordering::Equal => continue,
                o => return Ok(o),
            }
        }
    }
    Ok(Ordering::Equal)
}
