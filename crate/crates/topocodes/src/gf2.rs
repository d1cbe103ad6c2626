//! Dense linear algebra over GF(2).
//!
//! Vectors are packed into `u64` words. Elimination always pivots on the
//! leftmost column with a nonzero entry and takes the first available row,
//! so bases and solutions are reproducible.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn nwords(len: usize) -> usize {
    len.div_ceil(64)
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; nwords(len)] }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_indices(len: usize, idx: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in idx {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `len` bits of `mask`, bit i of the mask going to position i.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64);
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if b {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut r = self.clone();
        r.xor_assign(other);
        r
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        assert_eq!(self.len, other.len, "length mismatch");
        BitVec {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Parity of the overlap.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "length mismatch");
        let mut acc = 0u32;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= (a & b).count_ones();
        }
        acc & 1 == 1
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * 64 + t)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.ones_iter().collect()
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut r = BitVec::zeros(self.len + other.len);
        for i in self.ones_iter() {
            r.set(i, true);
        }
        for i in other.ones_iter() {
            r.set(self.len + i, true);
        }
        r
    }

    pub fn slice(&self, start: usize, end: usize) -> BitVec {
        let mut r = BitVec::zeros(end - start);
        for i in self.ones_iter().filter(|&i| i >= start && i < end) {
            r.set(i - start, true);
        }
        r
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    ncols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix { ncols, rows: vec![BitVec::zeros(ncols); nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(ncols: usize, rows: Vec<BitVec>) -> Self {
        for r in &rows {
            assert_eq!(r.len(), ncols, "row length mismatch");
        }
        BitMatrix { ncols, rows }
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| BitVec::from_bools(&r.iter().map(|&x| x & 1 == 1).collect::<Vec<_>>()))
            .collect();
        BitMatrix::from_rows(ncols, rows)
    }

    /// Builds an `nrows x ncols` matrix from column supports.
    pub fn from_columns(nrows: usize, cols: &[Vec<usize>]) -> Self {
        let mut m = BitMatrix::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for &i in c {
                m.rows[i].flip(j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, b: bool) {
        self.rows[i].set(j, b)
    }

    pub fn push_row(&mut self, r: BitVec) {
        assert_eq!(r.len(), self.ncols);
        self.rows.push(r);
    }

    pub fn column(&self, j: usize) -> BitVec {
        let mut v = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.get(j) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones_iter() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// M·v.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.ncols, "length mismatch");
        let mut out = BitVec::zeros(self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            if r.dot(v) {
                out.set(i, true);
            }
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.nrows(), "shape mismatch");
        let mut out = BitMatrix::zeros(self.nrows(), other.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for k in r.ones_iter() {
                out.rows[i].xor_assign(&other.rows[k]);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    /// Row echelon form. Returns the reduced matrix (fully reduced, rows in
    /// pivot order) and the pivot column of each nonzero row.
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else { continue };
            rows.swap(r, p);
            let pr = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pr);
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        (BitMatrix { ncols: self.ncols, rows }, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {v : M·v = 0}, one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<BitVec> {
        let (red, piv) = self.rref();
        let mut is_piv = vec![false; self.ncols];
        for &p in &piv {
            is_piv[p] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.ncols).filter(|&c| !is_piv[c]) {
            let mut v = BitVec::zeros(self.ncols);
            v.set(f, true);
            for (i, &p) in piv.iter().enumerate() {
                if red.rows[i].get(f) {
                    v.set(p, true);
                }
            }
            out.push(v);
        }
        out
    }

    /// Basis of the row space (the nonzero rows of the reduced form).
    pub fn row_basis(&self) -> Vec<BitVec> {
        self.rref().0.rows
    }

    /// Some x with M·x = b, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &BitVec) -> Option<BitVec> {
        assert_eq!(b.len(), self.nrows(), "length mismatch");
        // eliminate on the augmented matrix [M | b]
        let aug: Vec<BitVec> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.concat(&BitVec::from_bools(&[b.get(i)])))
            .collect();
        let (red, piv) = BitMatrix::from_rows(self.ncols + 1, aug).rref();
        if piv.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = BitVec::zeros(self.ncols);
        for (i, &p) in piv.iter().enumerate() {
            if red.rows[i].get(self.ncols) {
                x.set(p, true);
            }
        }
        Some(x)
    }
}

pub fn rank(m: &BitMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVec> {
    m.kernel_basis()
}

pub fn solve(m: &BitMatrix, b: &BitVec) -> Option<BitVec> {
    m.solve(b)
}

/// True iff `v` is a combination of `basis`. Panics on length mismatch.
pub fn in_span(v: &BitVec, basis: &[BitVec]) -> bool {
    if v.is_zero() {
        return true;
    }
    Span::new(v.len(), basis).contains(v)
}

/// Incrementally maintained reduced basis for fast membership tests.
#[derive(Clone, Debug)]
pub struct Span {
    len: usize,
    // (pivot, row) with each pivot cleared from every other row
    rows: Vec<(usize, BitVec)>,
}

impl Span {
    pub fn new(len: usize, vecs: &[BitVec]) -> Self {
        let mut s = Span { len, rows: Vec::new() };
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.len, "length mismatch");
        let mut r = v.clone();
        for (p, row) in &self.rows {
            if r.get(*p) {
                r.xor_assign(row);
            }
        }
        r
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.first_one() else { return false };
        for (_, row) in self.rows.iter_mut() {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        self.rows.push((p, r));
        true
    }
}
