//! Pauli-frame propagation of faults through Clifford circuits.
//!
//! Under conjugation by the circuit a Pauli fault stays a Pauli operator, and
//! its effect on a run is linear: it flips a fixed set of measurement
//! outcomes and leaves a fixed Pauli on the surviving qubits. Because every
//! check of our circuits is deterministic in the noiseless circuit, the
//! check values of a faulty run and the residual error on the output block
//! are exactly the XOR of the effects of the individual faults. This is what
//! makes exhaustive audits and fast Monte-Carlo sampling possible.
//!
//! Propagation rules (frame bits `x`, `z` per qubit):
//! `CNOT c->t`: `x_t ^= x_c`, `z_c ^= z_t`; `H`: swap `x`, `z`;
//! `SWAP`: swap both qubits; preparations clear the qubit's frame;
//! `MeasZ` reports `x`, `MeasX` reports `z`.

use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng;

use crate::circuit::{faults_at, Circuit, FaultLocation, Gate, Pauli1, PauliString, Timing};
use crate::gf2::BitVec;

/// Measurement slot of every gate (`None` for non-measurements).
pub fn measurement_slots(c: &Circuit) -> Vec<Option<usize>> {
    let mut next = 0;
    c.gates()
        .iter()
        .map(|g| {
            g.is_measurement().then(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// Applies gate `g` to a frame, recording measurement flips.
#[inline]
pub fn propagate_gate(g: &Gate, slot: Option<usize>, frame: &mut PauliString, flips: &mut BitVec) {
    match *g {
        Gate::PrepZ(q) | Gate::PrepX(q) => frame.set(q, Pauli1::I),
        Gate::H(q) => {
            let (x, z) = (frame.x.get(q), frame.z.get(q));
            frame.x.set(q, z);
            frame.z.set(q, x);
        }
        Gate::Cnot { control, target } => {
            if frame.x.get(control) {
                frame.x.flip(target);
            }
            if frame.z.get(target) {
                frame.z.flip(control);
            }
        }
        Gate::Swap(a, b) => {
            let (pa, pb) = (frame.get(a), frame.get(b));
            frame.set(a, pb);
            frame.set(b, pa);
        }
        Gate::MeasZ(q) => {
            if frame.x.get(q) {
                flips.flip(slot.expect("measurement slot"));
            }
        }
        Gate::MeasX(q) => {
            if frame.z.get(q) {
                flips.flip(slot.expect("measurement slot"));
            }
        }
        Gate::Pauli(_) => {}
    }
}

/// Propagates `fault`, inserted at `(gate_index, timing)`, to the end of the
/// circuit. Returns measurement flips and the final frame on all qubits.
pub fn propagate(
    c: &Circuit,
    gate_index: usize,
    timing: Timing,
    fault: &PauliString,
) -> (BitVec, PauliString) {
    let slots = measurement_slots(c);
    propagate_with_slots(c, &slots, gate_index, timing, fault)
}

fn propagate_with_slots(
    c: &Circuit,
    slots: &[Option<usize>],
    gate_index: usize,
    timing: Timing,
    fault: &PauliString,
) -> (BitVec, PauliString) {
    let mut frame = fault.clone();
    let mut flips = BitVec::zeros(c.num_measurements());
    let start = match timing {
        Timing::Before => gate_index,
        Timing::After => gate_index + 1,
    };
    for (i, g) in c.gates().iter().enumerate().skip(start) {
        propagate_gate(g, slots[i], &mut frame, &mut flips);
    }
    (flips, frame)
}

/// Check parities of a measurement-flip vector.
pub fn check_flips(c: &Circuit, flips: &BitVec) -> BitVec {
    BitVec::from_bools(
        &c.checks()
            .iter()
            .map(|ch| ch.slots.iter().filter(|&&s| flips.get(s)).count() % 2 == 1)
            .collect::<Vec<_>>(),
    )
}

/// Effect of one fault on a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultEffect {
    pub location: FaultLocation,
    /// Flipped measurement outcomes.
    pub flips: BitVec,
    /// Flipped check parities; the run is accepted iff this is zero.
    pub checks: BitVec,
    /// Residual Pauli on the output block.
    pub output: PauliString,
}

impl FaultEffect {
    pub fn accepted(&self) -> bool {
        self.checks.is_zero()
    }
}

/// Effect of every single fault of the noise model, in
/// [`crate::circuit::enumerate_fault_locations`] order.
///
/// Uses linearity: each noisy gate needs only the propagation of `X` and `Z`
/// on each of its qubits; the 15 two-qubit faults are XOR combinations.
pub fn compile_fault_effects(c: &Circuit) -> Vec<FaultEffect> {
    let slots = measurement_slots(c);
    let out = c.output_range();
    let n = c.num_qubits();
    let mut effects = Vec::new();
    for (gi, g) in c.gates().iter().enumerate() {
        let locs = faults_at(gi, g);
        if locs.is_empty() {
            continue;
        }
        let timing = locs[0].timing;
        let qubits = g.qubits();
        let mut basis: Vec<(BitVec, PauliString)> = Vec::with_capacity(4);
        for &q in &qubits {
            for p in [Pauli1::X, Pauli1::Z] {
                let mut f = PauliString::identity(n);
                f.set(q, p);
                basis.push(propagate_with_slots(c, &slots, gi, timing, &f));
            }
        }
        for loc in locs {
            let mut flips = BitVec::zeros(c.num_measurements());
            let mut frame = PauliString::identity(n);
            for k in 0..2 {
                if loc.fault.paulis[k] == Pauli1::I {
                    continue;
                }
                let qi = qubits
                    .iter()
                    .position(|&q| q == loc.fault.qubits[k])
                    .expect("fault on gate qubit");
                let p = loc.fault.paulis[k];
                if p.has_x() {
                    flips.xor_assign(&basis[2 * qi].0);
                    frame.mul_assign(&basis[2 * qi].1);
                }
                if p.has_z() {
                    flips.xor_assign(&basis[2 * qi + 1].0);
                    frame.mul_assign(&basis[2 * qi + 1].1);
                }
            }
            let checks = check_flips(c, &flips);
            effects.push(FaultEffect {
                location: loc,
                flips,
                checks,
                output: restrict(&frame, out.clone()),
            });
        }
    }
    effects
}

/// Restriction of a Pauli to a qubit range.
pub fn restrict(p: &PauliString, range: Range<usize>) -> PauliString {
    PauliString {
        x: p.x.slice(range.start, range.len()),
        z: p.z.slice(range.start, range.len()),
    }
}

/// Outcome of one sampled run of a compiled circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameSample {
    pub accepted: bool,
    /// Residual Pauli on the output block.
    pub output: PauliString,
}

#[derive(Clone, Copy, Debug)]
enum NoisyGate {
    /// Index of the single fault effect.
    Single(usize),
    /// Index of the first of 15 consecutive effects.
    Cnot(usize),
}

/// Compiled fault-effect table for fast Monte-Carlo sampling under the
/// circuit-level noise model. Sampling is exact for the Clifford circuits
/// of this crate, whose checks are deterministic without noise.
#[derive(Clone, Debug)]
pub struct FaultSampler {
    gates: Vec<NoisyGate>,
    check_words: usize,
    out_words: usize,
    out_len: usize,
    stride: usize,
    table: Vec<u64>,
    qubits_per_attempt: usize,
}

impl FaultSampler {
    pub fn new(c: &Circuit) -> Self {
        let effects = compile_fault_effects(c);
        let out_len = c.output_range().len();
        let check_words = c.checks().len().div_ceil(64);
        let out_words = out_len.div_ceil(64);
        let stride = check_words + 2 * out_words;
        let mut table = Vec::with_capacity(effects.len() * stride);
        let mut gates = Vec::new();
        let mut last_gate = usize::MAX;
        for (i, e) in effects.iter().enumerate() {
            if e.location.gate_index != last_gate {
                last_gate = e.location.gate_index;
                gates.push(match c.gates()[last_gate] {
                    Gate::Cnot { .. } => NoisyGate::Cnot(i),
                    _ => NoisyGate::Single(i),
                });
            }
            let mut row = alloc::vec![0u64; stride];
            row[..check_words].copy_from_slice(&e.checks.words()[..check_words]);
            row[check_words..check_words + out_words].copy_from_slice(e.output.x.words());
            row[check_words + out_words..].copy_from_slice(e.output.z.words());
            table.extend_from_slice(&row);
        }
        FaultSampler {
            gates,
            check_words,
            out_words,
            out_len,
            stride,
            table,
            qubits_per_attempt: c.num_qubits(),
        }
    }

    /// Number of noisy gates (locations that fire with probability `p`).
    pub fn num_noisy_gates(&self) -> usize {
        self.gates.len()
    }

    /// Register size of the compiled circuit.
    pub fn qubits_per_attempt(&self) -> usize {
        self.qubits_per_attempt
    }

    pub fn output_len(&self) -> usize {
        self.out_len
    }

    /// One noisy run. Each noisy gate fails independently with probability
    /// `p`; a failing CNOT draws one of its 15 Paulis uniformly. Failing
    /// gates are located by geometric skipping.
    pub fn sample<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> FrameSample {
        let mut acc = alloc::vec![0u64; self.stride];
        self.sample_words(p, rng, &mut acc);
        let accepted = acc[..self.check_words].iter().all(|&w| w == 0);
        let x = words_to_bitvec(
            &acc[self.check_words..self.check_words + self.out_words],
            self.out_len,
        );
        let z = words_to_bitvec(&acc[self.check_words + self.out_words..], self.out_len);
        FrameSample {
            accepted,
            output: PauliString { x, z },
        }
    }

    fn sample_words<R: Rng + ?Sized>(&self, p: f64, rng: &mut R, acc: &mut [u64]) {
        if p <= 0.0 {
            return;
        }
        let log_q = libm::log1p(-p);
        let mut i = 0usize;
        loop {
            i = i.saturating_add(geometric_skip(p, log_q, rng));
            if i >= self.gates.len() {
                break;
            }
            let e = match self.gates[i] {
                NoisyGate::Single(e) => e,
                NoisyGate::Cnot(e) => e + rng.random_range(0..15),
            };
            let row = &self.table[e * self.stride..(e + 1) * self.stride];
            for (a, b) in acc.iter_mut().zip(row) {
                *a ^= b;
            }
            i += 1;
        }
    }
}

/// Number of non-failing trials before the next failure.
#[inline]
fn geometric_skip<R: Rng + ?Sized>(p: f64, log_q: f64, rng: &mut R) -> usize {
    if p >= 1.0 {
        return 0;
    }
    let u: f64 = rng.random();
    let k = libm::floor(libm::log1p(-u) / log_q);
    if k >= usize::MAX as f64 {
        usize::MAX
    } else {
        k as usize
    }
}

fn words_to_bitvec(words: &[u64], len: usize) -> BitVec {
    let mut v = BitVec::zeros(len);
    for (wi, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let t = w.trailing_zeros() as usize;
            v.set(wi * 64 + t, true);
            w &= w - 1;
        }
    }
    v
}
