//! Stabilizer codes, the symplectic double construction, logical operators
//! and brute-force distance search.
//!
//! Qubits are 0-based here. The built-in constants are stored in the
//! matrix text format and embedded at compile time.

use alloc::format;
use alloc::vec::Vec;

use itertools::Itertools;

use crate::gf2::{BitMatrix, BitVec};
use crate::{Basis, Error, Result};

const SEED_TEXT: &str = include_str!("../assets/seed_15_3_5.txt");
const LOGICAL_BLOCK_TEXT: &str = include_str!("../assets/logical_block_m.txt");

/// Stabilizer matrix `(hx | hz)` of a (generally non-CSS) code on `n` qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonCssSeed {
    n: usize,
    hx: BitMatrix,
    hz: BitMatrix,
}

impl NonCssSeed {
    /// Validates shape, symplectic orthogonality and full row rank.
    pub fn new(hx: BitMatrix, hz: BitMatrix) -> Result<Self> {
        if hx.shape() != hz.shape() {
            return Err(Error::DimensionMismatch {
                op: "seed",
                left: hx.shape(),
                right: hz.shape(),
            });
        }
        let n = hx.num_cols();
        let r = hx.num_rows();
        for i in 0..r {
            for j in i..r {
                if hx.row(i).dot(hz.row(j)) ^ hz.row(i).dot(hx.row(j)) {
                    return Err(Error::NotOrthogonal {
                        row_a: i + 1,
                        row_b: j + 1,
                    });
                }
            }
        }
        let rank = hx.hstack(&hz)?.rank();
        if rank != r {
            return Err(Error::RankDeficient {
                expected: r,
                found: rank,
            });
        }
        Ok(NonCssSeed { n, hx, hz })
    }

    /// Splits a `r x 2n` matrix `(hx | hz)`.
    pub fn from_combined(h: &BitMatrix) -> Result<Self> {
        if !h.num_cols().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                op: "seed",
                left: h.shape(),
                right: (h.num_rows(), h.num_cols() + 1),
            });
        }
        let n = h.num_cols() / 2;
        NonCssSeed::new(h.column_block(0, n), h.column_block(n, n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hx(&self) -> &BitMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &BitMatrix {
        &self.hz
    }

    pub fn combined(&self) -> BitMatrix {
        self.hx.hstack(&self.hz).expect("equal row counts")
    }
}

/// The [[15,3,5]] seed shipped with the crate.
pub fn builtin_seed() -> NonCssSeed {
    let h = BitMatrix::parse(SEED_TEXT).expect("embedded seed parses");
    NonCssSeed::from_combined(&h).expect("embedded seed is valid")
}

/// The 3 x 15 block `M`; the built-in logical matrices are `diag(M, M)`.
pub fn builtin_logical_block() -> BitMatrix {
    BitMatrix::parse(LOGICAL_BLOCK_TEXT).expect("embedded logical block parses")
}

/// A CSS stabilizer code with optional logical operators.
///
/// `lx`/`lz` have zero rows until logicals are attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    n: usize,
    k: usize,
    sx: BitMatrix,
    sz: BitMatrix,
    lx: BitMatrix,
    lz: BitMatrix,
}

impl StabilizerCode {
    /// CSS code from X- and Z-stabilizer matrices.
    pub fn new(sx: BitMatrix, sz: BitMatrix) -> Result<Self> {
        if sx.num_cols() != sz.num_cols() {
            return Err(Error::DimensionMismatch {
                op: "css",
                left: sx.shape(),
                right: sz.shape(),
            });
        }
        for i in 0..sx.num_rows() {
            for j in 0..sz.num_rows() {
                if sx.row(i).dot(sz.row(j)) {
                    return Err(Error::NotOrthogonal {
                        row_a: i + 1,
                        row_b: j + 1,
                    });
                }
            }
        }
        let n = sx.num_cols();
        let k = n - sx.rank() - sz.rank();
        Ok(StabilizerCode {
            n,
            k,
            lx: BitMatrix::empty(n),
            lz: BitMatrix::empty(n),
            sx,
            sz,
        })
    }

    /// Attaches logical operators after checking every commutation condition.
    pub fn with_logicals(mut self, lx: BitMatrix, lz: BitMatrix) -> Result<Self> {
        check_logicals(&self, &lx, &lz)?;
        self.lx = lx;
        self.lz = lz;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sx(&self) -> &BitMatrix {
        &self.sx
    }

    pub fn sz(&self) -> &BitMatrix {
        &self.sz
    }

    pub fn lx(&self) -> &BitMatrix {
        &self.lx
    }

    pub fn lz(&self) -> &BitMatrix {
        &self.lz
    }

    pub fn has_logicals(&self) -> bool {
        self.lx.num_rows() == self.k && self.lz.num_rows() == self.k
    }

    pub fn stabilizers(&self, basis: Basis) -> &BitMatrix {
        match basis {
            Basis::X => &self.sx,
            Basis::Z => &self.sz,
        }
    }

    pub fn logicals(&self, basis: Basis) -> &BitMatrix {
        match basis {
            Basis::X => &self.lx,
            Basis::Z => &self.lz,
        }
    }

    pub fn logical(&self, basis: Basis, index: usize) -> LogicalOperator {
        LogicalOperator {
            basis,
            index,
            support: self.logicals(basis).row(index).clone(),
        }
    }

    /// Re-checks all stabilizer and logical conditions.
    pub fn validate(&self) -> Result<()> {
        StabilizerCode::new(self.sx.clone(), self.sz.clone())?;
        if self.has_logicals() {
            check_logicals(self, &self.lx, &self.lz)?;
        }
        Ok(())
    }

    /// If `sx = (A | B)` and `sz = (B | A)`, returns the seed `(A | B)`.
    pub fn double_structure(&self) -> Option<(BitMatrix, BitMatrix)> {
        if !self.n.is_multiple_of(2) || self.sx.num_rows() != self.sz.num_rows() {
            return None;
        }
        let h = self.n / 2;
        let (a, b) = (self.sx.column_block(0, h), self.sx.column_block(h, h));
        (self.sz.column_block(0, h) == b && self.sz.column_block(h, h) == a).then_some((a, b))
    }
}

fn check_logicals(code: &StabilizerCode, lx: &BitMatrix, lz: &BitMatrix) -> Result<()> {
    if lx.num_cols() != code.n || lz.num_cols() != code.n {
        return Err(Error::InvalidLogicals(format!(
            "logical rows must have {} columns",
            code.n
        )));
    }
    if lx.num_rows() != code.k || lz.num_rows() != code.k {
        return Err(Error::InvalidLogicals(format!(
            "expected {} logical operators per basis",
            code.k
        )));
    }
    if !code.sx.mat_mul(&lz.transpose())?.is_zero() {
        return Err(Error::InvalidLogicals(
            "a logical Z anticommutes with an X stabilizer".into(),
        ));
    }
    if !code.sz.mat_mul(&lx.transpose())?.is_zero() {
        return Err(Error::InvalidLogicals(
            "a logical X anticommutes with a Z stabilizer".into(),
        ));
    }
    if lx.mat_mul(&lz.transpose())? != BitMatrix::identity(code.k) {
        return Err(Error::InvalidLogicals(
            "logical X/Z pairing is not the identity".into(),
        ));
    }
    Ok(())
}

/// `sx = (hx | hz)`, `sz = (hz | hx)` on `2n` qubits. Logicals are left unset.
pub fn symplectic_double(seed: &NonCssSeed) -> Result<StabilizerCode> {
    let sx = seed.hx.hstack(&seed.hz)?;
    let sz = seed.hz.hstack(&seed.hx)?;
    StabilizerCode::new(sx, sz)
}

/// The [[30,6,5]] code with the shipped logical operators attached.
pub fn builtin_code() -> StabilizerCode {
    let m = builtin_logical_block();
    let lx = m.block_diag(&m);
    symplectic_double(&builtin_seed())
        .and_then(|c| c.with_logicals(lx.clone(), lx))
        .expect("built-in code is consistent")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalOperator {
    pub basis: Basis,
    pub index: usize,
    pub support: BitVec,
}

/// Derives a logical basis with `lx · lzᵀ = I`.
///
/// Codes with symplectic double structure use the seed route: the kernel of
/// the stacked seed `(hx ; hz)` in reduced row-echelon form gives a block
/// `M`, and the logicals are `diag(M, M)` (pairing corrected if `M Mᵀ ≠ I`).
/// Other codes extend the stabilizer row spaces to the commutant.
pub fn derive_logicals(code: &StabilizerCode) -> Result<(BitMatrix, BitMatrix)> {
    if let Some((a, b)) = code.double_structure() {
        if let Some(pair) = seed_route(code, &a, &b)? {
            return Ok(pair);
        }
    }
    generic_route(code)
}

fn seed_route(
    code: &StabilizerCode,
    a: &BitMatrix,
    b: &BitMatrix,
) -> Result<Option<(BitMatrix, BitMatrix)>> {
    let m = a.vstack(b)?.kernel().row_basis();
    if 2 * m.num_rows() != code.k {
        return Ok(None);
    }
    let gram = m.mat_mul(&m.transpose())?;
    let Some(inv) = gram.inverse() else {
        return Ok(None);
    };
    let mz = inv.transpose().mat_mul(&m)?;
    let lx = m.block_diag(&m);
    let lz = mz.block_diag(&mz);
    Ok(check_logicals(code, &lx, &lz).is_ok().then_some((lx, lz)))
}

fn generic_route(code: &StabilizerCode) -> Result<(BitMatrix, BitMatrix)> {
    let lx = complement_basis(&code.sx, &code.sz.kernel())?;
    let lz = complement_basis(&code.sz, &code.sx.kernel())?;
    if lx.num_rows() != code.k || lz.num_rows() != code.k {
        return Err(Error::InvalidLogicals(
            "commutant dimension disagrees with k".into(),
        ));
    }
    let gram = lx.mat_mul(&lz.transpose())?;
    let inv = gram
        .inverse()
        .ok_or_else(|| Error::InvalidLogicals("logical pairing matrix is singular".into()))?;
    let lz = inv.transpose().mat_mul(&lz)?;
    check_logicals(code, &lx, &lz)?;
    Ok((lx, lz))
}

/// Rows of `space` that extend `rowspace(stabs)` to `rowspace(space)`.
fn complement_basis(stabs: &BitMatrix, space: &BitMatrix) -> Result<BitMatrix> {
    let mut acc = stabs.row_basis();
    let mut out = BitMatrix::empty(space.num_cols());
    for v in space.row_basis().rows() {
        let trial = {
            let mut t = acc.clone();
            t.push_row(v.clone())?;
            t
        };
        if trial.rank() > acc.num_rows() {
            acc = trial.row_basis();
            out.push_row(v.clone())?;
        }
    }
    Ok(out)
}

/// Outcome of a bounded distance search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distance {
    Exact(usize),
    AtLeast(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub distance: Distance,
    /// Type and support of a minimum-weight nontrivial logical, when found.
    pub witness: Option<(Basis, BitVec)>,
}

/// Largest weight the exhaustive search accepts.
pub const MAX_DISTANCE_SEARCH: usize = 6;

/// Exhaustive search over X- and Z-type patterns of weight `<= w_max`.
///
/// A Z-type pattern `v` is a nontrivial logical iff `sx·vᵀ = 0` and
/// `v ∉ rowspace(sz)`; X-type mirrors this. Patterns are visited in
/// increasing weight and lexicographic order, so the witness is the first
/// minimum-weight logical found (Z type before X type at equal weight).
pub fn code_distance(code: &StabilizerCode, w_max: usize) -> Result<DistanceReport> {
    if w_max > MAX_DISTANCE_SEARCH {
        return Err(Error::Budget(format!(
            "distance search limited to weight {MAX_DISTANCE_SEARCH}"
        )));
    }
    let n = code.n;
    let checks = [
        (Basis::Z, &code.sx, &code.sz),
        (Basis::X, &code.sz, &code.sx),
    ];
    for w in 1..=w_max {
        for (basis, check, stabs) in checks {
            let cols: Vec<BitVec> = (0..n).map(|q| check.column(q)).collect();
            let stab_rref = stabs.rref();
            let found = (0..n).combinations(w).find(|combo| {
                let mut syn = BitVec::zeros(check.num_rows());
                for &q in combo {
                    syn.xor_assign(&cols[q]);
                }
                if !syn.is_zero() {
                    return false;
                }
                let v = BitVec::from_indices(n, combo.iter().copied());
                !crate::gf2::reduce_by_pivots(&v, &stab_rref.reduced, &stab_rref.pivots).is_zero()
            });
            if let Some(combo) = found {
                return Ok(DistanceReport {
                    distance: Distance::Exact(w),
                    witness: Some((basis, BitVec::from_indices(n, combo))),
                });
            }
        }
    }
    Ok(DistanceReport {
        distance: Distance::AtLeast(w_max + 1),
        witness: None,
    })
}
