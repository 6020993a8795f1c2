//! Exhaustive syndrome lookup tables and block decoding.
//!
//! A table for check matrix `h` (r x n, r <= 24, n <= 64) maps every
//! syndrome to a minimum-weight error with that syndrome. Errors are
//! enumerated by weight, and within a weight in combination order; the
//! first pattern reaching a syndrome wins. Syndromes that no pattern of
//! weight `<= w_max` reaches are filled by continuing the enumeration at
//! higher weights for those syndromes only; the table records the largest
//! weight it needed.
//!
//! Basis convention: the `X` table decodes X-basis measurement outcomes,
//! which see Z errors through the X-type checks `sx`; the `Z` table decodes
//! Z-basis outcomes through `sz`.

use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;

use crate::code::StabilizerCode;
use crate::gf2::{BitMatrix, BitVec};
use crate::{Basis, Error, Result};

/// Largest supported number of check rows (table size `2^rows`).
pub const MAX_SYNDROME_BITS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LookupTable {
    basis: Basis,
    n: usize,
    rows: usize,
    w_max: usize,
    max_weight_used: usize,
    columns: Vec<u32>,
    entries: Vec<u64>,
}

/// Syndrome of a pattern given per-column syndromes.
fn pattern_syndrome(columns: &[u32], pattern: u64) -> u32 {
    let mut s = 0;
    let mut p = pattern;
    while p != 0 {
        s ^= columns[p.trailing_zeros() as usize];
        p &= p - 1;
    }
    s
}

fn column_syndromes(h: &BitMatrix) -> Vec<u32> {
    (0..h.num_cols())
        .map(|j| {
            (0..h.num_rows())
                .filter(|&i| h.get(i, j))
                .fold(0u32, |s, i| s | (1 << i))
        })
        .collect()
}

impl LookupTable {
    /// Builds the table for check matrix `h` enumerating weights `0..=w_max`.
    pub fn build(h: &BitMatrix, basis: Basis, w_max: usize) -> Result<Self> {
        let (rows, n) = h.shape();
        if rows > MAX_SYNDROME_BITS || n > 64 {
            return Err(Error::Budget(alloc::format!(
                "lookup tables support at most {MAX_SYNDROME_BITS} checks and 64 qubits, got {rows}x{n}"
            )));
        }
        let columns = column_syndromes(h);
        let size = 1usize << rows;
        let mut entries = vec![0u64; size];
        let mut filled = vec![false; size];
        filled[0] = true;
        let mut remaining = size - 1;
        let mut max_weight_used = 0;
        let mut w = 1;
        while remaining > 0 && w <= n {
            for combo in (0..n).combinations(w) {
                let pattern = combo.iter().fold(0u64, |p, &i| p | (1 << i));
                let s = pattern_syndrome(&columns, pattern) as usize;
                if !filled[s] {
                    filled[s] = true;
                    entries[s] = pattern;
                    remaining -= 1;
                    max_weight_used = w;
                }
            }
            w += 1;
        }
        if remaining > 0 {
            return Err(Error::RankDeficient {
                expected: rows,
                found: h.rank(),
            });
        }
        Ok(LookupTable {
            basis,
            n,
            rows,
            w_max,
            max_weight_used,
            columns,
            entries,
        })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn syndrome_bits(&self) -> usize {
        self.rows
    }

    pub fn w_max(&self) -> usize {
        self.w_max
    }

    /// Largest weight stored; above `w_max` iff the fallback was needed.
    pub fn max_weight_used(&self) -> usize {
        self.max_weight_used
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Whether syndrome `s` is served by a pattern of weight above `w_max`.
    pub fn is_fallback(&self, s: u32) -> bool {
        self.entries[s as usize].count_ones() as usize > self.w_max
    }

    pub fn syndrome_of(&self, pattern: u64) -> u32 {
        pattern_syndrome(&self.columns, pattern)
    }

    pub fn syndrome_of_bits(&self, v: &BitVec) -> u32 {
        self.syndrome_of(v.to_u64())
    }

    /// Stored minimum-weight pattern for syndrome `s`.
    #[inline]
    pub fn decode(&self, s: u32) -> u64 {
        self.entries[s as usize]
    }

    /// Reassembles a table from stored entries, validating every entry's
    /// syndrome against `h`.
    pub fn from_entries(
        h: &BitMatrix,
        basis: Basis,
        w_max: usize,
        entries: Vec<u64>,
    ) -> Result<Self> {
        let (rows, n) = h.shape();
        if rows > MAX_SYNDROME_BITS || n > 64 || entries.len() != 1 << rows {
            return Err(Error::DimensionMismatch {
                op: "lookup table",
                left: (entries.len(), n),
                right: (1 << rows, n),
            });
        }
        let columns = column_syndromes(h);
        for (s, &e) in entries.iter().enumerate() {
            if (n < 64 && e >> n != 0) || pattern_syndrome(&columns, e) as usize != s {
                return Err(Error::Parse {
                    line: s + 1,
                    message: alloc::format!("entry {s} has the wrong syndrome"),
                });
            }
        }
        let max_weight_used = entries
            .iter()
            .map(|e| e.count_ones() as usize)
            .max()
            .unwrap_or(0);
        Ok(LookupTable {
            basis,
            n,
            rows,
            w_max,
            max_weight_used,
            columns,
            entries,
        })
    }
}

/// Builds the table of `code` for measurement basis `basis`.
pub fn build_lookup(code: &StabilizerCode, basis: Basis, w_max: usize) -> Result<LookupTable> {
    LookupTable::build(code.stabilizers(basis), basis, w_max)
}

/// Decoded transversal measurement of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedBlock {
    pub corrected: BitVec,
    pub logicals: BitVec,
    pub syndrome: u32,
    /// The syndrome was served by a fallback entry above `w_max`.
    pub fallback: bool,
}

/// Decodes the `n` outcomes of a transversal measurement in the table's
/// basis and reads off the logical values with the matching logicals.
pub fn extract_logicals(
    measured: &BitVec,
    table: &LookupTable,
    code: &StabilizerCode,
) -> Result<DecodedBlock> {
    if measured.len() != table.n || code.n() != table.n {
        return Err(Error::DimensionMismatch {
            op: "extract_logicals",
            left: (1, measured.len()),
            right: (1, table.n),
        });
    }
    if !code.has_logicals() {
        return Err(Error::InvalidLogicals(
            "code has no logical operators".into(),
        ));
    }
    let syndrome = table.syndrome_of_bits(measured);
    let correction = BitVec::from_u64(table.n, table.decode(syndrome));
    let corrected = measured.xor(&correction);
    let logicals = code.logicals(table.basis).mul_vec(&corrected);
    Ok(DecodedBlock {
        corrected,
        logicals,
        syndrome,
        fallback: table.is_fallback(syndrome),
    })
}

/// Logical flips left by an error pattern after ideal decoding: the bits of
/// `lmat · (e + decode(h·e))`, packed LSB-first.
#[inline]
pub fn residual_logical_flips(table: &LookupTable, logical_masks: &[u64], error: u64) -> u64 {
    let residual = error ^ table.decode(table.syndrome_of(error));
    logical_masks.iter().enumerate().fold(0u64, |acc, (i, &m)| {
        acc | (((residual & m).count_ones() as u64 & 1) << i)
    })
}

/// Rows of a matrix with at most 64 columns as bit masks.
pub fn row_masks(m: &BitMatrix) -> Vec<u64> {
    m.rows().iter().map(|r| r.to_u64()).collect()
}
