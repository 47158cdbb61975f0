//! Dense linear algebra over GF(2) with rows packed into `u64` words.
//!
//! Elimination always picks the leftmost pivot column and, within it, the
//! first row holding a one, so every output is deterministic.

use std::fmt;

use crate::Error;

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// Fixed-length bit vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    #[must_use]
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Vector of length `len` with ones at `idx`.
    #[must_use]
    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in idx {
            v.set(i, true);
        }
        v
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let m = 1u64 << (i % WORD);
        if b {
            self.words[i / WORD] |= m;
        } else {
            self.words[i / WORD] &= !m;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Popcount of `self & other`.
    pub fn and_count(&self, other: &BitVec) -> usize {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVec) -> bool {
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() % 2 == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * WORD + t)
            })
        })
    }

    /// First set bit at or after `start`.
    fn next_one(&self, start: usize) -> Option<usize> {
        if start >= self.len {
            return None;
        }
        let mut wi = start / WORD;
        let mut w = self.words[wi] & (!0u64 << (start % WORD));
        loop {
            if w != 0 {
                let i = wi * WORD + w.trailing_zeros() as usize;
                return (i < self.len).then_some(i);
            }
            wi += 1;
            if wi >= self.words.len() {
                return None;
            }
            w = self.words[wi];
        }
    }

    /// Concatenation `self ‖ other`.
    #[must_use]
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut v = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            v.set(i, true);
        }
        for i in other.ones() {
            v.set(self.len + i, true);
        }
        v
    }

    /// Gather the bits at `idx` into a new vector.
    #[must_use]
    pub fn select(&self, idx: &[usize]) -> BitVec {
        let mut v = BitVec::zeros(idx.len());
        for (j, &i) in idx.iter().enumerate() {
            if self.get(i) {
                v.set(j, true);
            }
        }
        v
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from row vectors; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self, Error> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
        }
        Ok(Self { cols, rows })
    }

    /// Build from a dense 0/1 table; panics on ragged input.
    #[must_use]
    pub fn from_table(table: &[Vec<u8>]) -> Self {
        let cols = table.first().map_or(0, Vec::len);
        let rows = table
            .iter()
            .map(|r| {
                assert_eq!(r.len(), cols, "ragged table");
                BitVec::from_bools(&r.iter().map(|&b| b & 1 == 1).collect::<Vec<_>>())
            })
            .collect();
        Self { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<(), Error> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.ones() {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Columns listed in `idx`, in that order.
    #[must_use]
    pub fn select_cols(&self, idx: &[usize]) -> BitMatrix {
        BitMatrix { cols: idx.len(), rows: self.rows.iter().map(|r| r.select(idx)).collect() }
    }

    /// `self · v`.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(BitVec::from_bools(&self.rows.iter().map(|r| r.dot(v)).collect::<Vec<_>>()))
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Reduced row echelon form and its pivot columns.
    #[must_use]
    pub fn rref(&self) -> (BitMatrix, Vec<usize>) {
        let mut rows = self.rows.clone();
        // rows below the last pivot come out zero
        let pivots = eliminate(&mut rows, self.cols, None);
        (BitMatrix { cols: self.cols, rows }, pivots)
    }

    /// Basis of the right kernel `{v : self·v = 0}`.
    #[must_use]
    pub fn nullspace(&self) -> Vec<BitVec> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::zeros(self.cols);
            v.set(free, true);
            for (i, &p) in pivots.iter().enumerate() {
                if r.get(i, free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Coefficients `c` with `Σ c_i row_i = v`, if any.
    pub fn in_span(&self, v: &BitVec) -> Result<Option<BitVec>, Error> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let m = self.rows.len();
        let mut rows = self.rows.clone();
        let mut track: Vec<BitVec> = (0..m).map(|i| BitVec::from_indices(m, [i])).collect();
        let pivots = eliminate(&mut rows, self.cols, Some(&mut track));
        let mut rest = v.clone();
        let mut coeff = BitVec::zeros(m);
        for (i, &p) in pivots.iter().enumerate() {
            if rest.get(p) {
                rest.xor_assign(&rows[i]);
                coeff.xor_assign(&track[i]);
            }
        }
        Ok(rest.is_zero().then_some(coeff))
    }
}

/// Gauss-Jordan elimination in place. Returns pivot columns; pivot rows end
/// up in `rows[..pivots.len()]`. `track` receives the same row operations.
fn eliminate(rows: &mut [BitVec], cols: usize, mut track: Option<&mut Vec<BitVec>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut c = 0;
    while r < rows.len() && c < cols {
        // leftmost column with a one at or below row r
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in rows.iter().enumerate().skip(r) {
            if let Some(j) = row.next_one(c) {
                if best.is_none_or(|(bj, _)| j < bj) {
                    best = Some((j, i));
                    if j == c {
                        break;
                    }
                }
            }
        }
        let Some((pc, pr)) = best else { break };
        rows.swap(r, pr);
        if let Some(t) = track.as_deref_mut() {
            t.swap(r, pr);
        }
        let prow = rows[r].clone();
        let ptrack = track.as_ref().map(|t| t[r].clone());
        for i in 0..rows.len() {
            if i != r && rows[i].get(pc) {
                rows[i].xor_assign(&prow);
                if let (Some(t), Some(pt)) = (track.as_deref_mut(), ptrack.as_ref()) {
                    t[i].xor_assign(pt);
                }
            }
        }
        pivots.push(pc);
        r += 1;
        c = pc + 1;
    }
    pivots
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "{r:?}")?;
        }
        Ok(())
    }
}
