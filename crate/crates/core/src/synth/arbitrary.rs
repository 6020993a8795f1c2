//! Arbitrary-state encoder: six open input qubits are mapped onto the six
//! logical qubits.
//!
//! The logical Z rows are first cleaned of the pivot columns of `rref(sz)`
//! by adding reduced Z-check rows, which leaves each row supported on
//! control qubits only. Each row then owns one input qubit: a column of the
//! cleaned matrix that is 1 in that row and 0 in every other row. For every
//! other 1-entry `q` of the row, a CNOT with control `q` and the input as
//! target is placed before the plus encoder's CNOTs. Conjugating `Z_input`
//! through these CNOTs gives exactly the row's logical Z, which the plus
//! encoder's CNOTs leave alone (they only touch Z on their targets), so a
//! `|->` input becomes a logical `|->`. A `|+>` input is untouched by CNOTs
//! targeting it, so all-plus inputs give the plus encoder's state.

use alloc::vec::Vec;

use super::plus::{push_preparations, push_raw_cnots, PlusLayout};
use crate::circuit::Circuit;
use crate::code::StabilizerCode;
use crate::gf2::BitMatrix;
use crate::{Error, Result};

/// Logical Z rows with the pivot columns of `rref(sz)` eliminated.
pub fn derive_mz_prime(code: &StabilizerCode) -> Result<BitMatrix> {
    if !code.has_logicals() {
        return Err(Error::InvalidLogicals(
            "code has no logical operators".into(),
        ));
    }
    let layout = PlusLayout::new(code);
    let mut rows = Vec::with_capacity(code.k());
    for row in code.lz().rows() {
        let mut v = row.clone();
        for (i, &t) in layout.targets.iter().enumerate() {
            if v.get(t) {
                v.xor_assign(layout.reduced.row(i));
            }
        }
        if layout.targets.iter().any(|&t| v.get(t)) {
            return Err(Error::Synthesis(
                "pivot columns could not be cleared from a logical Z row".into(),
            ));
        }
        rows.push(v);
    }
    BitMatrix::from_rows(rows, code.n())
}

/// Input qubit of each row of `mz_prime`: the last column equal to the
/// row's unit vector.
pub fn input_qubits(mz_prime: &BitMatrix) -> Result<Vec<usize>> {
    let cols: Vec<_> = (0..mz_prime.num_cols())
        .map(|j| mz_prime.column(j))
        .collect();
    (0..mz_prime.num_rows())
        .map(|r| {
            cols.iter()
                .rposition(|c| c.weight() == 1 && c.get(r))
                .ok_or_else(|| {
                    Error::Synthesis(alloc::format!("logical Z row {r} owns no input column"))
                })
        })
        .collect()
}

/// Arbitrary-state encoder. Input `r` (in the order of `Circuit::inputs`)
/// becomes logical qubit `r`.
pub fn synth_arbitrary_encoder(code: &StabilizerCode) -> Result<Circuit> {
    let mz = derive_mz_prime(code)?;
    let inputs = input_qubits(&mz)?;
    let layout = PlusLayout::new(code);
    let mut c = Circuit::new(code.n());
    push_preparations(&mut c, &layout, &inputs)?;
    for &q in &inputs {
        c.add_input(q)?;
    }
    for (row, &a) in mz.rows().iter().zip(&inputs) {
        for q in row.iter_ones().filter(|&q| q != a) {
            c.cnot(q, a)?;
        }
    }
    push_raw_cnots(&mut c, &layout)?;
    c.add_block("data", 0..code.n())?;
    c.set_output("data")?;
    Ok(c)
}
