//! Reordering of encoder CNOTs so that the early part of the circuit keeps
//! every instantaneous stabilizer generator light.
//!
//! While all generators have weight below 4, any fault's spread is
//! equivalent, modulo the instantaneous stabilizers, to at most a
//! single-qubit error, so faults there are harmless. The pass tracks the
//! generators that start as `Z_q` (for `PrepZ`) and `X_q` (for `PrepX`) and
//! greedily schedules CNOTs that keep them light, respecting the order of
//! CNOTs that do not commute (one's control is the other's target). The
//! first CNOT that cannot be scheduled this way marks the boundary of the
//! early stage; the remaining CNOTs keep their original relative order.

use alloc::vec::Vec;

use crate::circuit::{Circuit, Gate, Pauli1, PauliString};
use crate::Result;

/// Weight threshold: generators must stay strictly below it.
pub const EARLY_STAGE_WEIGHT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reordered {
    pub circuit: Circuit,
    /// Number of CNOTs in the early stage (index into the CNOT sequence).
    pub boundary: usize,
    /// Gate index in `circuit` of the first CNOT after the early stage
    /// (equals the gate count when every CNOT is early).
    pub boundary_gate: usize,
}

/// Instantaneous generators: one per prepared qubit.
#[derive(Clone, Debug)]
pub struct GeneratorTracker {
    gens: Vec<PauliString>,
}

impl GeneratorTracker {
    pub fn from_preparations(c: &Circuit) -> Self {
        let n = c.num_qubits();
        let gens = c
            .gates()
            .iter()
            .filter_map(|g| match *g {
                Gate::PrepZ(q) => Some((q, Pauli1::Z)),
                Gate::PrepX(q) => Some((q, Pauli1::X)),
                _ => None,
            })
            .map(|(q, p)| {
                let mut s = PauliString::identity(n);
                s.set(q, p);
                s
            })
            .collect();
        GeneratorTracker { gens }
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        for g in &mut self.gens {
            if g.x.get(control) {
                g.x.flip(target);
            }
            if g.z.get(target) {
                g.z.flip(control);
            }
        }
    }

    pub fn max_weight(&self) -> usize {
        self.gens.iter().map(|g| g.weight()).max().unwrap_or(0)
    }

    /// Largest generator weight after a hypothetical CNOT.
    pub fn max_weight_after(&self, control: usize, target: usize) -> usize {
        let mut t = self.clone();
        t.cnot(control, target);
        t.max_weight()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.gens
    }
}

fn conflicts(a: (usize, usize), b: (usize, usize)) -> bool {
    a.0 == b.1 || a.1 == b.0
}

/// Reorders the contiguous CNOT block of `c` (all gates between the leading
/// preparations and the first non-CNOT gate after them).
pub fn reorder_for_low_weight(c: &Circuit) -> Result<Reordered> {
    let gates = c.gates();
    let start = gates
        .iter()
        .position(|g| g.is_cnot())
        .unwrap_or(gates.len());
    let end = gates[start..]
        .iter()
        .position(|g| !g.is_cnot())
        .map_or(gates.len(), |k| start + k);
    let cnots: Vec<(usize, usize)> = gates[start..end]
        .iter()
        .map(|g| match *g {
            Gate::Cnot { control, target } => (control, target),
            _ => unreachable!(),
        })
        .collect();
    let mut tracker = GeneratorTracker::from_preparations(c);
    let mut placed = alloc::vec![false; cnots.len()];
    let mut order: Vec<usize> = Vec::with_capacity(cnots.len());
    loop {
        let mut choice: Option<(usize, usize)> = None;
        for i in 0..cnots.len() {
            if placed[i] || (0..i).any(|k| !placed[k] && conflicts(cnots[k], cnots[i])) {
                continue;
            }
            let w = tracker.max_weight_after(cnots[i].0, cnots[i].1);
            if w < EARLY_STAGE_WEIGHT && choice.is_none_or(|(bw, _)| w < bw) {
                choice = Some((w, i));
            }
        }
        let Some((_, i)) = choice else { break };
        placed[i] = true;
        tracker.cnot(cnots[i].0, cnots[i].1);
        order.push(i);
    }
    let boundary = order.len();
    order.extend((0..cnots.len()).filter(|&i| !placed[i]));
    let mut new_gates: Vec<Gate> = gates[..start].to_vec();
    new_gates.extend(order.iter().map(|&i| Gate::Cnot {
        control: cnots[i].0,
        target: cnots[i].1,
    }));
    new_gates.extend_from_slice(&gates[end..]);
    let boundary_gate = if boundary == cnots.len() {
        new_gates.len()
    } else {
        start + boundary
    };
    Ok(Reordered {
        circuit: c.with_gates(new_gates)?,
        boundary,
        boundary_gate,
    })
}
