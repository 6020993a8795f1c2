//! Dense, word-packed GF(2) vectors and matrices.
//!
//! Bit `i` of a [`BitVec`] lives in word `i / 64` at position `i % 64`.
//! Unused high bits of the last word are always zero, so word-level
//! equality, hashing and popcounts are exact.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::{Error, Result};

const WORD_BITS: usize = 64;

/// Largest basis rank for which [`BitMatrix::reduce_mod_rowspace`] enumerates
/// the full coset.
pub const COSET_RANK_LIMIT: usize = 16;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, indices: I) -> Self {
        let mut v = BitVec::zeros(len);
        for i in indices {
            v.set(i, true);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVec::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    /// Builds a vector of length `len <= 64` from the low bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 supports at most 64 bits");
        let mut v = BitVec::zeros(len);
        if len > 0 {
            v.words[0] = bits & mask_low(len);
        }
        v
    }

    /// Low 64 bits as an integer (bit `i` of the result is entry `i`).
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_u64 requires len <= 64");
        self.words.first().copied().unwrap_or(0)
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
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let bit = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= bit;
        } else {
            self.words[i / WORD_BITS] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &BitVec) -> BitVec {
        debug_assert_eq!(self.len, other.len);
        BitVec {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    /// Inner product over GF(2).
    #[inline]
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD_BITS + t)
                }
            })
        })
    }

    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.iter_ones().next()
    }

    /// Concatenation `(self | other)`.
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }

    /// Entries `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        assert!(start + len <= self.len);
        BitVec::from_indices(
            len,
            self.iter_ones()
                .filter(|&i| i >= start && i < start + len)
                .map(|i| i - start),
        )
    }

    /// Weight first, then support order (see [`support_order`]).
    pub fn cmp_weight_lex(&self, other: &BitVec) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| support_order(self, other))
    }
}

/// Lexicographic order of supports: the vector whose sorted support list comes
/// first is smaller. For equal weights this equals the enumeration order of
/// index combinations, which is the tie-break rule used throughout the crate.
pub fn support_order(a: &BitVec, b: &BitVec) -> Ordering {
    debug_assert_eq!(a.len, b.len);
    for (wa, wb) in a.words.iter().zip(&b.words) {
        let diff = wa ^ wb;
        if diff != 0 {
            let bit = diff & diff.wrapping_neg();
            return if wa & bit != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
    }
    Ordering::Equal
}

fn mask_low(bits: usize) -> u64 {
    if bits >= WORD_BITS {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

/// Result of Gaussian elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// Reduced row-echelon form; zero rows are kept at the bottom.
    pub reduced: BitMatrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    /// An empty matrix with `cols` columns.
    pub fn empty(cols: usize) -> Self {
        BitMatrix {
            rows: Vec::new(),
            cols,
        }
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::RaggedRows {
                    row: i + 1,
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(BitMatrix { rows, cols })
    }

    /// Parses the matrix text format: one row per line of `0`/`1`
    /// characters. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut cols = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut row = BitVec::zeros(line.len());
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => row.set(j, true),
                    other => {
                        return Err(Error::Parse {
                            line: lineno + 1,
                            message: alloc::format!("unexpected character {other:?}"),
                        })
                    }
                }
            }
            match cols {
                None => cols = Some(line.len()),
                Some(c) if c != line.len() => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        message: alloc::format!("row has {} entries, expected {c}", line.len()),
                    })
                }
                _ => {}
            }
            rows.push(row);
        }
        Ok(BitMatrix {
            rows,
            cols: cols.unwrap_or(0),
        })
    }

    /// Renders in the matrix text format (one row per line, trailing newline).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.cols)
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::RaggedRows {
                row: self.rows.len() + 1,
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn column(&self, j: usize) -> BitVec {
        BitVec::from_indices(
            self.rows.len(),
            (0..self.rows.len()).filter(|&i| self.rows[i].get(j)),
        )
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (i, r) in self.rows.iter().enumerate() {
            for j in r.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mat_mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows.len() {
            return Err(Error::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|a| {
                let mut acc = BitVec::zeros(other.cols);
                for k in a.iter_ones() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(BitMatrix {
            rows,
            cols: other.cols,
        })
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.xor(b))
            .collect();
        Ok(BitMatrix {
            rows,
            cols: self.cols,
        })
    }

    /// `self · vᵀ`, i.e. the syndrome of `v` when `self` is a check matrix.
    pub fn mul_vec(&self, v: &BitVec) -> BitVec {
        assert_eq!(v.len(), self.cols, "mul_vec: vector length mismatch");
        BitVec::from_indices(
            self.rows.len(),
            (0..self.rows.len()).filter(|&i| self.rows[i].dot(v)),
        )
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows.len() != other.rows.len() {
            return Err(Error::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.concat(b))
            .collect();
        Ok(BitMatrix {
            rows,
            cols: self.cols + other.cols,
        })
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(BitMatrix {
            rows,
            cols: self.cols,
        })
    }

    /// Block-diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &BitMatrix) -> BitMatrix {
        let left = self
            .hstack(&BitMatrix::zeros(self.rows.len(), other.cols))
            .expect("shape");
        let right = BitMatrix::zeros(other.rows.len(), self.cols)
            .hstack(other)
            .expect("shape");
        left.vstack(&right).expect("shape")
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.rows.len() {
                break;
            }
            let Some(p) = (r..m.rows.len()).find(|&i| m.rows[i].get(c)) else {
                continue;
            };
            m.rows.swap(r, p);
            let pivot_row = m.rows[r].clone();
            for (i, row) in m.rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            reduced: m,
            pivots,
            rank: r,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right null space `{v : self · vᵀ = 0}`, one vector per
    /// row; there are `cols - rank` rows.
    pub fn kernel(&self) -> BitMatrix {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let rows = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVec::zeros(self.cols);
                v.set(f, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if reduced.rows[i].get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect();
        BitMatrix {
            rows,
            cols: self.cols,
        }
    }

    /// Nonzero rows of the reduced row-echelon form.
    pub fn row_basis(&self) -> BitMatrix {
        let Rref {
            mut reduced, rank, ..
        } = self.rref();
        reduced.rows.truncate(rank);
        reduced
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVec) -> bool {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        reduce_by_pivots(v, &reduced, &pivots).is_zero()
    }

    /// Minimum-weight representative of the coset `v + rowspace(self)`;
    /// ties go to the support that comes first lexicographically.
    /// Enumerates all `2^rank` combinations, so the rank is capped at
    /// [`COSET_RANK_LIMIT`].
    pub fn reduce_mod_rowspace(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "reduce_mod_rowspace",
                left: (1, v.len()),
                right: self.shape(),
            });
        }
        let basis = self.row_basis();
        let rank = basis.num_rows();
        if rank > COSET_RANK_LIMIT {
            return Err(Error::BasisTooLarge {
                rank,
                limit: COSET_RANK_LIMIT,
            });
        }
        let mut current = v.clone();
        let mut best = v.clone();
        // Gray-code walk: step i flips the basis row at the lowest set bit of i.
        for i in 1u64..(1u64 << rank) {
            current.xor_assign(&basis.rows[i.trailing_zeros() as usize]);
            if current.cmp_weight_lex(&best) == Ordering::Less {
                best.clone_from(&current);
            }
        }
        Ok(best)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.rows.len();
        if n != self.cols {
            return None;
        }
        let aug = self.hstack(&BitMatrix::identity(n)).ok()?;
        let Rref {
            reduced, pivots, ..
        } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows = reduced.rows.iter().map(|r| r.slice(n, n)).collect();
        Some(BitMatrix { rows, cols: n })
    }

    /// Columns `start..start + len` as a new matrix.
    pub fn column_block(&self, start: usize, len: usize) -> BitMatrix {
        BitMatrix {
            rows: self.rows.iter().map(|r| r.slice(start, len)).collect(),
            cols: len,
        }
    }

    /// Sub-matrix built from the selected rows.
    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        BitMatrix {
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            cols: self.cols,
        }
    }
}

/// Clears pivot positions of `v` using rows of a reduced matrix.
pub fn reduce_by_pivots(v: &BitVec, reduced: &BitMatrix, pivots: &[usize]) -> BitVec {
    let mut out = v.clone();
    for (i, &p) in pivots.iter().enumerate() {
        if out.get(p) {
            out.xor_assign(&reduced.rows[i]);
        }
    }
    out
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "]")
    }
}
