//! Stabilizer tableau in the Aaronson–Gottesman (CHP) layout.

use alloc::vec::Vec;
use core::ops::Range;

use crate::circuit::{Pauli1, PauliString};
use crate::gf2::BitVec;
use crate::{Error, Result};

/// Hermitian Pauli operator with a sign: `(-1)^sign * P(x, z)` where each
/// qubit factor is one of `I, X, Y, Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPauli {
    pub x: BitVec,
    pub z: BitVec,
    pub sign: bool,
}

impl SignedPauli {
    pub fn identity(n: usize) -> Self {
        SignedPauli {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
            sign: false,
        }
    }

    pub fn from_pauli(p: &PauliString, sign: bool) -> Self {
        SignedPauli {
            x: p.x.clone(),
            z: p.z.clone(),
            sign,
        }
    }

    pub fn x_type(support: &BitVec, sign: bool) -> Self {
        SignedPauli {
            x: support.clone(),
            z: BitVec::zeros(support.len()),
            sign,
        }
    }

    pub fn z_type(support: &BitVec, sign: bool) -> Self {
        SignedPauli {
            x: BitVec::zeros(support.len()),
            z: support.clone(),
            sign,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn unsigned(&self) -> PauliString {
        PauliString {
            x: self.x.clone(),
            z: self.z.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn commutes_with(&self, other: &SignedPauli) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Replaces `self` by `self * other`. Both operators must commute, so
    /// the product is again Hermitian.
    pub fn mul_assign(&mut self, other: &SignedPauli) {
        let mut phase = 2 * (self.sign as u32 + other.sign as u32);
        let mut plus = 0u32;
        let mut minus = 0u32;
        for (((&x1, &z1), &x2), &z2) in self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .zip(other.x.words())
            .zip(other.z.words())
        {
            plus +=
                ((x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2)).count_ones();
            minus +=
                ((x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2)).count_ones();
        }
        phase = (phase + plus + 3 * minus) % 4;
        debug_assert!(phase.is_multiple_of(2), "product of anticommuting Paulis");
        self.sign = phase == 2;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    /// Restriction to a contiguous range of qubits (sign kept).
    pub fn slice(&self, range: Range<usize>) -> SignedPauli {
        SignedPauli {
            x: self.x.slice(range.start, range.len()),
            z: self.z.slice(range.start, range.len()),
            sign: self.sign,
        }
    }
}

impl core::fmt::Display for SignedPauli {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(if self.sign { "-" } else { "+" })?;
        for q in 0..self.num_qubits() {
            let p = Pauli1::from_bits(self.x.get(q), self.z.get(q));
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

/// Expectation value of a Pauli operator on a stabilizer state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Plus,
    Minus,
    Random,
}

/// Result of a single-qubit measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: bool,
    pub random: bool,
}

/// Pure stabilizer state on `n` qubits: rows `0..n` are destabilizers,
/// rows `n..2n` stabilizers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tableau {
    n: usize,
    rows: Vec<SignedPauli>,
}

impl Tableau {
    /// The all-`|0>` state.
    pub fn new(n: usize) -> Self {
        let mut rows = Vec::with_capacity(2 * n);
        for q in 0..n {
            let mut r = SignedPauli::identity(n);
            r.x.set(q, true);
            rows.push(r);
        }
        for q in 0..n {
            let mut r = SignedPauli::identity(n);
            r.z.set(q, true);
            rows.push(r);
        }
        Tableau { n, rows }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[SignedPauli] {
        &self.rows[self.n..]
    }

    pub fn h(&mut self, q: usize) {
        for r in &mut self.rows {
            let (x, z) = (r.x.get(q), r.z.get(q));
            r.sign ^= x & z;
            r.x.set(q, z);
            r.z.set(q, x);
        }
    }

    pub fn cnot(&mut self, c: usize, t: usize) {
        for r in &mut self.rows {
            let (xc, zc, xt, zt) = (r.x.get(c), r.z.get(c), r.x.get(t), r.z.get(t));
            r.sign ^= xc & zt & !(xt ^ zc);
            r.x.set(t, xt ^ xc);
            r.z.set(c, zc ^ zt);
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            let (xa, za, xb, zb) = (r.x.get(a), r.z.get(a), r.x.get(b), r.z.get(b));
            r.x.set(a, xb);
            r.z.set(a, zb);
            r.x.set(b, xa);
            r.z.set(b, za);
        }
    }

    /// Applies a single-qubit Pauli gate.
    pub fn apply(&mut self, q: usize, p: Pauli1) {
        for r in &mut self.rows {
            let anti = (p.has_x() && r.z.get(q)) ^ (p.has_z() && r.x.get(q));
            r.sign ^= anti;
        }
    }

    /// Applies a Pauli operator (global phase ignored).
    pub fn apply_pauli(&mut self, p: &PauliString) {
        for r in &mut self.rows {
            r.sign ^= r.z.dot(&p.x) ^ r.x.dot(&p.z);
        }
    }

    pub fn z_measurement_is_random(&self, q: usize) -> bool {
        self.stabilizers().iter().any(|r| r.x.get(q))
    }

    /// Measures `Z_q`. If the outcome is not determined by the state,
    /// `random_outcome` is used.
    pub fn measure_z(&mut self, q: usize, random_outcome: bool) -> Measurement {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&i| self.rows[i].x.get(q)) {
            let pivot = self.rows[p].clone();
            for i in 0..2 * n {
                if i != p && self.rows[i].x.get(q) {
                    self.rowsum(i, &pivot);
                }
            }
            self.rows[p - n] = pivot;
            let mut zq = SignedPauli::identity(n);
            zq.z.set(q, true);
            zq.sign = random_outcome;
            self.rows[p] = zq;
            Measurement {
                outcome: random_outcome,
                random: true,
            }
        } else {
            let mut acc = SignedPauli::identity(n);
            for i in 0..n {
                if self.rows[i].x.get(q) {
                    acc.mul_assign(&self.rows[i + n]);
                }
            }
            Measurement {
                outcome: acc.sign,
                random: false,
            }
        }
    }

    pub fn measure_x(&mut self, q: usize, random_outcome: bool) -> Measurement {
        self.h(q);
        let m = self.measure_z(q, random_outcome);
        self.h(q);
        m
    }

    pub fn x_measurement_is_random(&self, q: usize) -> bool {
        self.stabilizers().iter().any(|r| r.z.get(q))
    }

    /// Resets qubit `q` to `|0>`.
    pub fn reset_z(&mut self, q: usize) {
        if self.measure_z(q, false).outcome {
            self.apply(q, Pauli1::X);
        }
    }

    /// Resets qubit `q` to `|+>`.
    pub fn reset_x(&mut self, q: usize) {
        self.reset_z(q);
        self.h(q);
    }

    // Row products inside the tableau may anticommute (destabilizer rows);
    // their signs are irrelevant, so the phase is reduced mod 4 and taken
    // as is.
    fn rowsum(&mut self, h: usize, other: &SignedPauli) {
        let row = &mut self.rows[h];
        let mut phase = 2 * (row.sign as u32 + other.sign as u32);
        for (((&x1, &z1), &x2), &z2) in other
            .x
            .words()
            .iter()
            .zip(other.z.words())
            .zip(row.x.words())
            .zip(row.z.words())
        {
            let plus =
                ((x1 & z1 & !x2 & z2) | (x1 & !z1 & x2 & z2) | (!x1 & z1 & x2 & !z2)).count_ones();
            let minus =
                ((x1 & z1 & x2 & !z2) | (x1 & !z1 & !x2 & z2) | (!x1 & z1 & x2 & z2)).count_ones();
            phase += plus + 3 * minus;
        }
        row.sign = phase % 4 >= 2;
        row.x.xor_assign(&other.x);
        row.z.xor_assign(&other.z);
    }

    /// Expectation of the unsigned Pauli `p`.
    pub fn expectation(&self, p: &PauliString) -> Expectation {
        let probe = SignedPauli::from_pauli(p, false);
        if self.stabilizers().iter().any(|s| !s.commutes_with(&probe)) {
            return Expectation::Random;
        }
        let mut acc = SignedPauli::identity(self.n);
        for i in 0..self.n {
            if !self.rows[i].commutes_with(&probe) {
                acc.mul_assign(&self.rows[i + self.n]);
            }
        }
        debug_assert!(acc.x == p.x && acc.z == p.z);
        if acc.sign {
            Expectation::Minus
        } else {
            Expectation::Plus
        }
    }

    pub fn stabilizer_group(&self) -> StabilizerGroup {
        StabilizerGroup::from_generators(self.n, self.stabilizers().to_vec())
            .expect("tableau stabilizers are consistent")
    }
}

/// Canonical generating set of a stabilizer group: reduced echelon form
/// with column order `x_0..x_{n-1}, z_0..z_{n-1}` and signs tracked.
/// Two groups are equal iff their canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerGroup {
    n: usize,
    rows: Vec<SignedPauli>,
}

impl StabilizerGroup {
    /// Canonicalizes commuting generators. Dependent generators are
    /// dropped; a dependent generator whose sign contradicts the others
    /// (the group would contain `-I`) is an error.
    pub fn from_generators(n: usize, gens: Vec<SignedPauli>) -> Result<Self> {
        let columns: Vec<(bool, usize)> = (0..n)
            .map(|q| (false, q))
            .chain((0..n).map(|q| (true, q)))
            .collect();
        let rows = echelon(gens, &columns)?;
        Ok(StabilizerGroup { n, rows })
    }

    /// Group of a CSS stabilizer state: X-type rows then Z-type rows, all
    /// with sign `+`.
    pub fn css(x_rows: &[BitVec], z_rows: &[BitVec], n: usize) -> Result<Self> {
        let gens = x_rows
            .iter()
            .map(|r| SignedPauli::x_type(r, false))
            .chain(z_rows.iter().map(|r| SignedPauli::z_type(r, false)))
            .collect();
        StabilizerGroup::from_generators(n, gens)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[SignedPauli] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pure_state(&self) -> bool {
        self.rows.len() == self.n
    }

    /// Whether `p` (with sign) is an element of the group.
    pub fn contains(&self, p: &SignedPauli) -> bool {
        let mut rows = self.rows.clone();
        rows.push(p.clone());
        match StabilizerGroup::from_generators(self.n, rows) {
            Ok(g) => g.rows.len() == self.rows.len() && g == *self,
            Err(_) => false,
        }
    }

    /// Subgroup of elements supported inside `range`, expressed on the
    /// qubits of the range. Returns `None` unless that subgroup fixes a pure
    /// state on the range (i.e. the range is unentangled with the rest).
    pub fn restrict(&self, range: Range<usize>) -> Option<StabilizerGroup> {
        if range.end > self.n {
            return None;
        }
        let outside: Vec<usize> = (0..self.n).filter(|q| !range.contains(q)).collect();
        let mut columns: Vec<(bool, usize)> = Vec::new();
        columns.extend(outside.iter().map(|&q| (false, q)));
        columns.extend(outside.iter().map(|&q| (true, q)));
        columns.extend(range.clone().map(|q| (false, q)));
        columns.extend(range.clone().map(|q| (true, q)));
        let rows = echelon(self.rows.clone(), &columns).ok()?;
        let inside: Vec<SignedPauli> = rows
            .into_iter()
            .filter(|r| outside.iter().all(|&q| !r.x.get(q) && !r.z.get(q)))
            .map(|r| r.slice(range.clone()))
            .collect();
        let g = StabilizerGroup::from_generators(range.len(), inside).ok()?;
        g.is_pure_state().then_some(g)
    }
}

fn column_bit(p: &SignedPauli, col: (bool, usize)) -> bool {
    if col.0 {
        p.z.get(col.1)
    } else {
        p.x.get(col.1)
    }
}

fn echelon(mut rows: Vec<SignedPauli>, columns: &[(bool, usize)]) -> Result<Vec<SignedPauli>> {
    let mut rank = 0;
    for &col in columns {
        let Some(p) = (rank..rows.len()).find(|&i| column_bit(&rows[i], col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && column_bit(r, col) {
                r.mul_assign(&pivot);
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r.sign) {
        return Err(Error::InvalidLogicals(
            "stabilizer generators contain -I".into(),
        ));
    }
    rows.truncate(rank);
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn pauli(s: &str) -> PauliString {
        let mut p = PauliString::identity(s.len());
        for (q, ch) in s.chars().enumerate() {
            let op = match ch {
                'X' => Pauli1::X,
                'Y' => Pauli1::Y,
                'Z' => Pauli1::Z,
                _ => Pauli1::I,
            };
            p.set(q, op);
        }
        p
    }

    #[test]
    fn fresh_state_is_all_zero() {
        let t = Tableau::new(3);
        let g = t.stabilizer_group();
        let expected = StabilizerGroup::css(
            &[],
            &[
                BitVec::from_indices(3, [0]),
                BitVec::from_indices(3, [1]),
                BitVec::from_indices(3, [2]),
            ],
            3,
        )
        .unwrap();
        assert_eq!(g, expected);
        assert_eq!(g.generators()[0].to_string(), "+ZII");
    }

    #[test]
    fn bell_state_correlations() {
        let mut t = Tableau::new(2);
        t.h(0);
        t.cnot(0, 1);
        assert_eq!(t.expectation(&pauli("XX")), Expectation::Plus);
        assert_eq!(t.expectation(&pauli("ZZ")), Expectation::Plus);
        assert_eq!(t.expectation(&pauli("YY")), Expectation::Minus);
        assert_eq!(t.expectation(&pauli("ZI")), Expectation::Random);
        t.apply(0, Pauli1::Z);
        assert_eq!(t.expectation(&pauli("XX")), Expectation::Minus);
        let m0 = t.measure_z(0, true);
        assert!(m0.random && m0.outcome);
        let m1 = t.measure_z(1, false);
        assert!(!m1.random && m1.outcome);
    }

    #[test]
    fn x_measurement_of_plus_is_deterministic() {
        let mut t = Tableau::new(1);
        t.reset_x(0);
        let m = t.measure_x(0, true);
        assert!(!m.random && !m.outcome);
        t.apply(0, Pauli1::Z);
        assert!(t.measure_x(0, false).outcome);
    }

    #[test]
    fn swap_and_signs() {
        let mut t = Tableau::new(2);
        t.apply(0, Pauli1::X);
        t.swap(0, 1);
        assert_eq!(t.expectation(&pauli("IZ")), Expectation::Minus);
        assert_eq!(t.expectation(&pauli("ZI")), Expectation::Plus);
    }

    #[test]
    fn hadamard_maps_phase_flip_to_bit_flip() {
        let mut t = Tableau::new(1);
        t.h(0);
        assert_eq!(t.expectation(&pauli("X")), Expectation::Plus);
        t.apply(0, Pauli1::Z);
        assert_eq!(t.expectation(&pauli("X")), Expectation::Minus);
        t.h(0);
        assert_eq!(t.expectation(&pauli("Z")), Expectation::Minus);
        t.apply(0, Pauli1::Y);
        assert_eq!(t.expectation(&pauli("Z")), Expectation::Plus);
    }

    #[test]
    fn restriction_of_product_state() {
        let mut t = Tableau::new(4);
        t.h(0);
        t.cnot(0, 1);
        t.apply(3, Pauli1::X);
        let g = t.stabilizer_group();
        assert!(g.restrict(0..1).is_none());
        let pair = g.restrict(0..2).unwrap();
        let mut expected = Tableau::new(2);
        expected.h(0);
        expected.cnot(0, 1);
        assert_eq!(pair, expected.stabilizer_group());
        let last = g.restrict(3..4).unwrap();
        assert!(last.generators()[0].sign);
    }

    #[test]
    fn inconsistent_generators_rejected() {
        let a = SignedPauli::z_type(&BitVec::from_indices(2, [0]), false);
        let b = SignedPauli::z_type(&BitVec::from_indices(2, [0]), true);
        assert!(StabilizerGroup::from_generators(2, alloc::vec![a.clone(), b]).is_err());
        assert!(StabilizerGroup::from_generators(2, alloc::vec![a.clone(), a]).is_ok());
    }

    #[test]
    fn contains_checks_sign() {
        let mut t = Tableau::new(2);
        t.h(0);
        t.cnot(0, 1);
        let g = t.stabilizer_group();
        let yy = SignedPauli::from_pauli(&pauli("YY"), true);
        assert!(g.contains(&yy));
        assert!(!g.contains(&SignedPauli::from_pauli(&pauli("YY"), false)));
        assert!(!g.contains(&SignedPauli::from_pauli(&pauli("ZI"), false)));
    }
}
