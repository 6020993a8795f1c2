//! Plus-state encoder read off the reduced Z-check matrix.
//!
//! After Gaussian elimination `sz` has an identity on its pivot columns.
//! Pivot qubits start in `|0>`, the others in `|+>`, and each 1-entry
//! `(i, j)` with `j` a non-pivot column becomes `CNOT(j -> pivot_i)`. The
//! CNOTs all commute (no qubit is both a control and a target), and the
//! output is stabilized by `sz` (built by the CNOTs), by the orthogonal
//! complement of `sz`, i.e. all X stabilizers and X logicals.

use alloc::vec::Vec;

use crate::circuit::Circuit;
use crate::code::StabilizerCode;
use crate::gf2::BitMatrix;
use crate::Result;

/// Qubit roles of the plus encoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlusLayout {
    /// Reduced row-echelon form of `sz` without zero rows.
    pub reduced: BitMatrix,
    /// Pivot qubit of each reduced row (prepared in `|0>`, CNOT targets).
    pub targets: Vec<usize>,
    /// Non-pivot qubits (prepared in `|+>`, CNOT controls), ascending.
    pub controls: Vec<usize>,
}

impl PlusLayout {
    pub fn new(code: &StabilizerCode) -> Self {
        let r = code.sz().rref();
        let reduced = r.reduced.select_rows(&(0..r.rank).collect::<Vec<_>>());
        let controls = (0..code.n()).filter(|q| !r.pivots.contains(q)).collect();
        PlusLayout {
            reduced,
            targets: r.pivots,
            controls,
        }
    }

    /// Controls feeding target row `i`.
    pub fn row_controls(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.controls
            .iter()
            .copied()
            .filter(move |&j| self.reduced.get(i, j))
    }

    /// Target rows fed by control qubit `j`.
    pub fn column_targets(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.targets.len()).filter(move |&i| self.reduced.get(i, j))
    }

    /// Number of CNOTs of the raw encoder.
    pub fn raw_cnot_count(&self) -> usize {
        (0..self.targets.len())
            .map(|i| self.row_controls(i).count())
            .sum()
    }
}

/// Appends the preparations of the plus encoder, skipping `skip` qubits.
pub(crate) fn push_preparations(
    c: &mut Circuit,
    layout: &PlusLayout,
    skip: &[usize],
) -> Result<()> {
    for &t in &layout.targets {
        c.prep_z(t)?;
    }
    for &j in layout.controls.iter().filter(|j| !skip.contains(j)) {
        c.prep_x(j)?;
    }
    Ok(())
}

pub(crate) fn push_raw_cnots(c: &mut Circuit, layout: &PlusLayout) -> Result<()> {
    for (i, &t) in layout.targets.iter().enumerate() {
        for j in layout.row_controls(i) {
            c.cnot(j, t)?;
        }
    }
    Ok(())
}

/// Raw plus-state encoder: one CNOT per off-pivot 1-entry of `rref(sz)`,
/// in row-major order.
pub fn synth_plus_encoder(code: &StabilizerCode) -> Result<Circuit> {
    let layout = PlusLayout::new(code);
    let mut c = Circuit::new(code.n());
    push_preparations(&mut c, &layout, &[])?;
    push_raw_cnots(&mut c, &layout)?;
    c.add_block("data", 0..code.n())?;
    c.set_output("data")?;
    Ok(c)
}
