//! Fault-tolerant preparation protocols built from a plus encoder.
//!
//! * Proposed protocol: two copies of (encoder + verification ancillas).
//!   A transversal CNOT from block 1 to block 2 copies block 1's X errors
//!   onto block 2, which is then measured in the Z basis. The run is
//!   accepted iff every verification outcome is 0 and block 2's Z syndrome
//!   (`sz` parities of its outcomes) is 0. Block 2's logical Z values are
//!   uniformly random on a logical plus state, so they are not checked.
//!   Z errors of block 2 flow back into block 1 through the CNOT, which is
//!   why block 2 is verified as well. Output: block 1.
//! * Naive protocols with `kz * kx` copies of the bare encoder: copies are
//!   grouped into `kx` units of `kz`. Within a unit, each extra copy is a
//!   checker: `CNOT(checker -> data)` transversally, then the checker is
//!   measured in the X basis; the `sx` and `lx` parities must vanish (Z
//!   errors of the data copy onto the checker). Then `CNOT(unit 0 -> unit u)`
//!   transversally for each further unit, which is measured in the Z basis;
//!   the `sz` parities must vanish (X errors of unit 0 copy forward).
//!   Any failed check discards the whole attempt. Output: unit 0's data.

use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use crate::circuit::Circuit;
use crate::code::StabilizerCode;
use crate::gf2::BitMatrix;
use crate::Result;

/// Appends one check per row of `m`: the parity of the slots `slots[q]` over
/// the row's support.
fn add_parity_checks(c: &mut Circuit, stage: &str, m: &BitMatrix, slots: &[usize]) -> Result<()> {
    for row in m.rows() {
        c.add_check(stage, row.iter_ones().map(|q| slots[q]).collect())?;
    }
    Ok(())
}

fn measure_block_z(c: &mut Circuit, block: Range<usize>) -> Result<Vec<usize>> {
    block.map(|q| c.meas_z(q)).collect()
}

fn measure_block_x(c: &mut Circuit, block: Range<usize>) -> Result<Vec<usize>> {
    block.map(|q| c.meas_x(q)).collect()
}

/// Two-block protocol from a verified plus encoder (`verified` has its data
/// block first, followed by its ancillas).
pub fn two_block_protocol(code: &StabilizerCode, verified: &Circuit) -> Result<Circuit> {
    let n = code.n();
    let unit = verified.num_qubits();
    let mut c = Circuit::new(2 * unit);
    c.append_shifted(verified, 0, "b1.")?;
    c.append_shifted(verified, unit, "b2.")?;
    c.add_block("block1", 0..n)?;
    c.add_block("block2", unit..unit + n)?;
    c.transversal_cnot(0..n, unit..unit + n)?;
    let slots = measure_block_z(&mut c, unit..unit + n)?;
    add_parity_checks(&mut c, "x-check", code.sz(), &slots)?;
    c.set_output("block1")?;
    Ok(c)
}

/// Copy budget of a naive protocol: `kz` copies per Z-check unit and `kx`
/// units for the X check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NaiveVariant {
    Copies9,
    Copies6,
    Copies4,
}

impl NaiveVariant {
    pub const ALL: [NaiveVariant; 3] = [
        NaiveVariant::Copies9,
        NaiveVariant::Copies6,
        NaiveVariant::Copies4,
    ];

    /// `(kz, kx)`.
    pub fn shape(self) -> (usize, usize) {
        match self {
            NaiveVariant::Copies9 => (3, 3),
            NaiveVariant::Copies6 => (3, 2),
            NaiveVariant::Copies4 => (2, 2),
        }
    }

    pub fn copies(self) -> usize {
        let (kz, kx) = self.shape();
        kz * kx
    }

    pub fn name(self) -> &'static str {
        match self {
            NaiveVariant::Copies9 => "naive9",
            NaiveVariant::Copies6 => "naive6",
            NaiveVariant::Copies4 => "naive4",
        }
    }
}

/// Naive multi-copy protocol from a bare plus encoder on `code.n()` qubits.
pub fn synth_naive_encoder(
    code: &StabilizerCode,
    encoder: &Circuit,
    variant: NaiveVariant,
) -> Result<Circuit> {
    let n = code.n();
    let (kz, kx) = variant.shape();
    let mut c = Circuit::new(n * kz * kx);
    let block = |u: usize, k: usize| (u * kz + k) * n..(u * kz + k + 1) * n;
    for u in 0..kx {
        for k in 0..kz {
            c.append_shifted(encoder, block(u, k).start, &format!("u{u}c{k}."))?;
            c.add_block(&format!("copy{}", u * kz + k), block(u, k))?;
        }
    }
    let z_checks = code.sx().vstack(code.lx())?;
    for u in 0..kx {
        for k in 1..kz {
            c.transversal_cnot(block(u, k), block(u, 0))?;
            let slots = measure_block_x(&mut c, block(u, k))?;
            add_parity_checks(&mut c, "z-check", &z_checks, &slots)?;
        }
    }
    for u in 1..kx {
        c.transversal_cnot(block(0, 0), block(u, 0))?;
        let slots = measure_block_z(&mut c, block(u, 0))?;
        add_parity_checks(&mut c, "x-check", code.sz(), &slots)?;
    }
    c.set_output("copy0")?;
    Ok(c)
}

/// Zero-state preparation: a plus-state circuit followed by the logical
/// Hadamard layer (transversal H and the half-block SWAPs) on its output.
pub fn synth_zero_encoder(plus: &Circuit) -> Result<Circuit> {
    let mut c = plus.clone();
    c.logical_hadamard_layer(plus.output_range())?;
    Ok(c)
}
