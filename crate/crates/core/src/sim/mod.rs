//! Stabilizer simulation under the circuit-level noise model.
//!
//! Two engines share one noise model:
//! * [`tableau`]: exact state-vector-free simulation of Clifford circuits,
//!   used for noiseless verification, fault injection with branch
//!   enumeration, and reference Monte Carlo;
//! * [`frame`]: Pauli-frame propagation, used for exhaustive audits and
//!   high-throughput sampling.
//!
//! Random numbers come from ChaCha8 with one stream per shot, so results do
//! not depend on how shots are distributed over workers.

pub mod frame;
pub mod tableau;

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{faults_at, Circuit, FaultLocation, Gate, LocalPauli, Timing};
use crate::gf2::BitVec;
use crate::{Error, Result};

pub use frame::{compile_fault_effects, FaultEffect, FaultSampler, FrameSample};
pub use tableau::{Expectation, SignedPauli, StabilizerGroup, Tableau};

/// Generator for shot `shot` of a run seeded with `seed`.
pub fn shot_rng(seed: u64, shot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot);
    rng
}

/// Circuit-level noise with a single rate: every CNOT is followed by one
/// of its 15 non-identity two-qubit Paulis with total probability `p`;
/// preparations and measurements suffer the matching flip with probability
/// `p`; Hadamard and SWAP gates are ideal and there is no idle noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    p: f64,
}

impl NoiseModel {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Synthesis(alloc::format!(
                "error rate {p} outside [0, 1]"
            )));
        }
        Ok(NoiseModel { p })
    }

    pub fn noiseless() -> Self {
        NoiseModel { p: 0.0 }
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotOutcome {
    /// Measurement results in circuit order.
    pub measurements: BitVec,
    /// Parity of each check of the circuit.
    pub checks: BitVec,
}

impl ShotOutcome {
    pub fn accepted(&self) -> bool {
        self.checks.is_zero()
    }

    /// Acceptance of each verification stage (checks grouped by label, in
    /// order of first appearance).
    pub fn stage_acceptance<'a>(&self, c: &'a Circuit) -> Vec<(&'a str, bool)> {
        let mut out: Vec<(&str, bool)> = Vec::new();
        for (i, ch) in c.checks().iter().enumerate() {
            let ok = !self.checks.get(i);
            match out.iter_mut().find(|(s, _)| *s == ch.stage) {
                Some(e) => e.1 &= ok,
                None => out.push((&ch.stage, ok)),
            }
        }
        out
    }
}

fn evaluate_checks(c: &Circuit, m: &BitVec) -> BitVec {
    BitVec::from_bools(
        &c.checks()
            .iter()
            .map(|ch| ch.slots.iter().filter(|&&s| m.get(s)).count() % 2 == 1)
            .collect::<Vec<_>>(),
    )
}

fn apply_local(t: &mut Tableau, f: &LocalPauli) {
    t.apply(f.qubits[0], f.paulis[0]);
    if f.qubits[1] != f.qubits[0] || f.paulis[1] != crate::circuit::Pauli1::I {
        t.apply(f.qubits[1], f.paulis[1]);
    }
}

/// Executes gate `g` on `t`. Random measurement outcomes come from `coin`.
fn apply_gate(t: &mut Tableau, g: &Gate, coin: &mut dyn FnMut() -> bool) -> Option<bool> {
    match g {
        Gate::PrepZ(q) => t.reset_z(*q),
        Gate::PrepX(q) => t.reset_x(*q),
        Gate::H(q) => t.h(*q),
        Gate::Cnot { control, target } => t.cnot(*control, *target),
        Gate::Swap(a, b) => t.swap(*a, *b),
        Gate::Pauli(p) => t.apply_pauli(p),
        Gate::MeasZ(q) => {
            let r = t
                .z_measurement_is_random(*q)
                .then(&mut *coin)
                .unwrap_or(false);
            return Some(t.measure_z(*q, r).outcome);
        }
        Gate::MeasX(q) => {
            let r = t
                .x_measurement_is_random(*q)
                .then(&mut *coin)
                .unwrap_or(false);
            return Some(t.measure_x(*q, r).outcome);
        }
    }
    None
}

/// One noisy shot with the tableau engine; also returns the final state.
pub fn simulate<R: Rng + ?Sized>(
    c: &Circuit,
    noise: &NoiseModel,
    rng: &mut R,
) -> (ShotOutcome, Tableau) {
    let mut t = Tableau::new(c.num_qubits());
    let mut m = BitVec::zeros(c.num_measurements());
    let mut slot = 0;
    for (i, g) in c.gates().iter().enumerate() {
        let faults = if noise.p > 0.0 {
            faults_at(i, g)
        } else {
            Vec::new()
        };
        let fired = (!faults.is_empty() && rng.random_bool(noise.p)).then(|| {
            faults[if faults.len() == 1 {
                0
            } else {
                rng.random_range(0..faults.len())
            }]
        });
        if let Some(f) = fired.filter(|f| f.timing == Timing::Before) {
            apply_local(&mut t, &f.fault);
        }
        let mut coin = || rng.random::<bool>();
        if let Some(bit) = apply_gate(&mut t, g, &mut coin) {
            m.set(slot, bit);
            slot += 1;
        }
        if let Some(f) = fired.filter(|f| f.timing == Timing::After) {
            apply_local(&mut t, &f.fault);
        }
    }
    let checks = evaluate_checks(c, &m);
    (
        ShotOutcome {
            measurements: m,
            checks,
        },
        t,
    )
}

/// One noisy shot from `seed` (stream 0).
pub fn run(c: &Circuit, noise: &NoiseModel, seed: u64) -> ShotOutcome {
    simulate(c, noise, &mut shot_rng(seed, 0)).0
}

/// One branch of a deterministic faulty execution.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcome: ShotOutcome,
    pub state: Tableau,
}

/// Noiseless execution with one injected fault (`None` for the identity).
/// Every random measurement splits the run into both outcome branches;
/// more than `max_branches` branches is an error.
pub fn run_with_injected_fault(
    c: &Circuit,
    fault: Option<&FaultLocation>,
    max_branches: usize,
) -> Result<Vec<Branch>> {
    struct Pending {
        next_gate: usize,
        after_done: bool,
        state: Tableau,
        m: BitVec,
        slot: usize,
        forced: Option<bool>,
    }
    let mut done = Vec::new();
    let mut stack = alloc::vec![Pending {
        next_gate: 0,
        after_done: false,
        state: Tableau::new(c.num_qubits()),
        m: BitVec::zeros(c.num_measurements()),
        slot: 0,
        forced: None,
    }];
    let mut branches = 1usize;
    while let Some(mut p) = stack.pop() {
        while p.next_gate < c.gates().len() {
            let i = p.next_gate;
            let g = &c.gates()[i];
            let here = fault.filter(|f| f.gate_index == i);
            if p.forced.is_none() && !p.after_done {
                if let Some(f) = here.filter(|f| f.timing == Timing::Before) {
                    apply_local(&mut p.state, &f.fault);
                }
            }
            let random = match g {
                Gate::MeasZ(q) => p.state.z_measurement_is_random(*q),
                Gate::MeasX(q) => p.state.x_measurement_is_random(*q),
                _ => false,
            };
            if random && p.forced.is_none() {
                branches += 1;
                if branches > max_branches {
                    return Err(Error::Budget(alloc::format!(
                        "more than {max_branches} measurement branches"
                    )));
                }
                let other = Pending {
                    next_gate: i,
                    after_done: true,
                    state: p.state.clone(),
                    m: p.m.clone(),
                    slot: p.slot,
                    forced: Some(true),
                };
                stack.push(other);
                p.forced = Some(false);
            }
            let forced = p.forced.take();
            let mut coin = || forced.unwrap_or(false);
            if let Some(bit) = apply_gate(&mut p.state, g, &mut coin) {
                p.m.set(p.slot, bit);
                p.slot += 1;
            }
            if let Some(f) = here.filter(|f| f.timing == Timing::After) {
                apply_local(&mut p.state, &f.fault);
            }
            p.after_done = false;
            p.next_gate += 1;
        }
        let checks = evaluate_checks(c, &p.m);
        done.push(Branch {
            outcome: ShotOutcome {
                measurements: p.m,
                checks,
            },
            state: p.state,
        });
    }
    Ok(done)
}

/// Like [`run_with_injected_fault`] but follows a single branch, drawing
/// random outcomes from `rng`.
pub fn run_with_fault_sampled<R: Rng + ?Sized>(
    c: &Circuit,
    fault: Option<&FaultLocation>,
    rng: &mut R,
) -> Branch {
    let mut t = Tableau::new(c.num_qubits());
    let mut m = BitVec::zeros(c.num_measurements());
    let mut slot = 0;
    for (i, g) in c.gates().iter().enumerate() {
        let here = fault.filter(|f| f.gate_index == i);
        if let Some(f) = here.filter(|f| f.timing == Timing::Before) {
            apply_local(&mut t, &f.fault);
        }
        let mut coin = || rng.random::<bool>();
        if let Some(bit) = apply_gate(&mut t, g, &mut coin) {
            m.set(slot, bit);
            slot += 1;
        }
        if let Some(f) = here.filter(|f| f.timing == Timing::After) {
            apply_local(&mut t, &f.fault);
        }
    }
    let checks = evaluate_checks(c, &m);
    Branch {
        outcome: ShotOutcome {
            measurements: m,
            checks,
        },
        state: t,
    }
}

/// Canonical stabilizer group of a tableau.
pub fn extract_stabilizer_group(t: &Tableau) -> StabilizerGroup {
    t.stabilizer_group()
}
