//! Error-correcting teleportation and the logical-CNOT benchmark, in the
//! Pauli-frame picture.
//!
//! Every data block carries its physical Pauli error (`x`, `z` bit masks)
//! and a classical logical frame (`lx`, `lz`: pending logical X and Z
//! corrections, one bit per logical qubit). Ideal states are never
//! simulated: all circuits are Clifford, so errors and frames propagate
//! linearly and a block is logically correct iff ideal decoding of its
//! physical error cancels its frame.
//!
//! One teleportation step on input block `D`:
//!
//! 1. Bell pair: fault-tolerant plus state `A` and zero state `B` (each
//!    re-encoded until accepted), noisy transversal CNOT `A -> B`.
//! 2. Bell measurement: noisy transversal CNOT `D -> A`, noisy transversal
//!    X measurement of `D` and Z measurement of `A`.
//! 3. Both outcomes are decoded with the lookup tables. The decoded logical
//!    values of `D` become Z corrections, those of `A` X corrections, of
//!    the output `B`, which keeps its own physical error and inherits the
//!    frame of `D`.

use rand::Rng;
use sdc_core::code::StabilizerCode;
use sdc_core::decoder::{build_lookup, residual_logical_flips, row_masks, LookupTable};
use sdc_core::sim::{compile_fault_effects, FaultSampler, FrameSample};
use sdc_core::Basis;

use super::decoder::DEFAULT_W_MAX;
use super::encoders::EncoderPair;
use super::noise::{bernoulli_mask, for_each_failure, pair_pauli_bits};
use super::runner::{Runner, Tally};
use super::stats::{fit_power_law, per_gate_rate, wilson_interval, SweepPoint};
use super::Sweep;

/// Rounds of transversal logical CNOTs per benchmark shot.
pub const DEFAULT_ROUNDS: u32 = 10;

/// Physical error and logical frame of one block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct BlockFrame {
    pub x: u64,
    pub z: u64,
    /// Pending logical X corrections.
    pub lx: u64,
    /// Pending logical Z corrections.
    pub lz: u64,
}

/// Explicit faults of one teleportation step (outside the encoders).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepFaults {
    /// `(qubit, pauli)` after the Bell-pair CNOT `A_q -> B_q`; `pauli`
    /// indexes the 15 two-qubit Paulis.
    pub bell_cnot: Vec<(usize, usize)>,
    /// `(qubit, pauli)` after the Bell-measurement CNOT `D_q -> A_q`.
    pub meas_cnot: Vec<(usize, usize)>,
    /// Phase flips before the X measurement of `D`.
    pub meas_d: u64,
    /// Bit flips before the Z measurement of `A`.
    pub meas_a: u64,
}

/// Accepted encoder output as `(x, z)` masks.
pub type Prepared = (u64, u64);

fn masks(s: &FrameSample) -> Prepared {
    (s.output.x.to_u64(), s.output.z.to_u64())
}

/// Everything a teleportation step needs: the encoder samplers and both
/// decoding tables.
pub struct Gadget {
    pair: EncoderPair,
    plus: FaultSampler,
    zero: FaultSampler,
    table_x: LookupTable,
    table_z: LookupTable,
    lx: Vec<u64>,
    lz: Vec<u64>,
    n: usize,
    paulis: [(bool, bool, bool, bool); 15],
}

impl Gadget {
    pub fn new(code: &StabilizerCode, pair: EncoderPair) -> sdc_core::Result<Self> {
        if code.n() > 64
            || pair.plus.output_range().len() != code.n()
            || pair.zero.output_range().len() != code.n()
        {
            return Err(sdc_core::Error::Synthesis(
                "encoder outputs must be single blocks of at most 64 qubits".into(),
            ));
        }
        Ok(Gadget {
            plus: FaultSampler::new(&pair.plus),
            zero: FaultSampler::new(&pair.zero),
            pair,
            table_x: build_lookup(code, Basis::X, DEFAULT_W_MAX)?,
            table_z: build_lookup(code, Basis::Z, DEFAULT_W_MAX)?,
            lx: row_masks(code.lx()),
            lz: row_masks(code.lz()),
            n: code.n(),
            paulis: pair_pauli_bits(),
        })
    }

    pub fn encoders(&self) -> &EncoderPair {
        &self.pair
    }

    pub fn plus_sampler(&self) -> &FaultSampler {
        &self.plus
    }

    pub fn zero_sampler(&self) -> &FaultSampler {
        &self.zero
    }

    /// Logical X and Z errors left on a block after ideal decoding of its
    /// physical error, with its frame applied.
    pub fn logical_error(&self, b: &BlockFrame) -> (u64, u64) {
        (
            b.lx ^ residual_logical_flips(&self.table_z, &self.lz, b.x),
            b.lz ^ residual_logical_flips(&self.table_x, &self.lx, b.z),
        )
    }

    fn apply_pair_fault(&self, c: &mut BlockFrame, t: &mut BlockFrame, q: usize, pauli: usize) {
        let (xa, za, xb, zb) = self.paulis[pauli];
        let bit = 1u64 << q;
        c.x ^= if xa { bit } else { 0 };
        c.z ^= if za { bit } else { 0 };
        t.x ^= if xb { bit } else { 0 };
        t.z ^= if zb { bit } else { 0 };
    }

    /// Ideal transversal CNOT `c -> t` on errors and frames.
    pub fn transversal_cnot(c: &mut BlockFrame, t: &mut BlockFrame) {
        t.x ^= c.x;
        c.z ^= t.z;
        t.lx ^= c.lx;
        c.lz ^= t.lz;
    }

    /// Transversal CNOT followed by the given pair faults.
    pub fn faulty_cnot(&self, c: &mut BlockFrame, t: &mut BlockFrame, faults: &[(usize, usize)]) {
        Self::transversal_cnot(c, t);
        for &(q, pauli) in faults {
            self.apply_pair_fault(c, t, q, pauli);
        }
    }

    /// Noisy transversal CNOT: each pair fails with probability `p`.
    pub fn noisy_cnot<R: Rng + ?Sized>(
        &self,
        c: &mut BlockFrame,
        t: &mut BlockFrame,
        p: f64,
        rng: &mut R,
    ) {
        let faults = sample_pair_faults(self.n, p, rng);
        self.faulty_cnot(c, t, &faults);
    }

    /// Teleportation of `d` through a Bell pair made from the prepared
    /// errors `a` (plus state) and `b` (zero state).
    pub fn teleport(
        &self,
        mut d: BlockFrame,
        a: Prepared,
        b: Prepared,
        f: &StepFaults,
    ) -> BlockFrame {
        let mut a = BlockFrame {
            x: a.0,
            z: a.1,
            ..BlockFrame::default()
        };
        let mut b = BlockFrame {
            x: b.0,
            z: b.1,
            ..BlockFrame::default()
        };
        self.faulty_cnot(&mut a, &mut b, &f.bell_cnot);
        self.faulty_cnot(&mut d, &mut a, &f.meas_cnot);
        let r_d = residual_logical_flips(&self.table_x, &self.lx, d.z ^ f.meas_d);
        let r_a = residual_logical_flips(&self.table_z, &self.lz, a.x ^ f.meas_a);
        BlockFrame {
            x: b.x,
            z: b.z,
            lx: d.lx ^ r_a,
            lz: d.lz ^ r_d,
        }
    }

    fn prepare<R: Rng + ?Sized>(
        sampler: &FaultSampler,
        p: f64,
        rng: &mut R,
        tally: &mut Tally,
    ) -> Prepared {
        loop {
            tally.attempts += 1;
            let s = sampler.sample(p, rng);
            if s.accepted {
                tally.accepted += 1;
                return masks(&s);
            }
        }
    }

    /// One noisy teleportation step at circuit error rate `p`.
    pub fn sample_step<R: Rng + ?Sized>(
        &self,
        d: BlockFrame,
        p: f64,
        rng: &mut R,
        tally: &mut Tally,
    ) -> BlockFrame {
        let a = Self::prepare(&self.plus, p, rng, tally);
        let b = Self::prepare(&self.zero, p, rng, tally);
        let faults = StepFaults {
            bell_cnot: sample_pair_faults(self.n, p, rng),
            meas_cnot: sample_pair_faults(self.n, p, rng),
            meas_d: bernoulli_mask(self.n, p, rng),
            meas_a: bernoulli_mask(self.n, p, rng),
        };
        self.teleport(d, a, b, &faults)
    }

    /// One benchmark shot: `rounds` rounds of a noisy transversal CNOT
    /// between two data blocks, each followed by teleportation of both
    /// blocks. The blocks start as ideal halves of logical Bell pairs, so
    /// the shot fails iff any logical error is left at the end.
    pub fn cnot_shot<R: Rng + ?Sized>(&self, p: f64, rounds: u32, rng: &mut R) -> Tally {
        let mut tally = Tally::default();
        let (mut d1, mut d2) = (BlockFrame::default(), BlockFrame::default());
        for _ in 0..rounds {
            self.noisy_cnot(&mut d1, &mut d2, p, rng);
            d1 = self.sample_step(d1, p, rng, &mut tally);
            d2 = self.sample_step(d2, p, rng, &mut tally);
        }
        let failed = self.logical_error(&d1) != (0, 0) || self.logical_error(&d2) != (0, 0);
        tally.failures = failed as u64;
        tally
    }

    /// Exhaustive single-fault audit of one benchmark round: every accepted
    /// single fault of either encoder, every pair fault of the three
    /// transversal CNOT layers and every measurement flip, each alone,
    /// starting from error-free data blocks. Returns `(faults, failures)`.
    pub fn audit_single_faults(&self) -> (usize, usize) {
        let mut faults = 0;
        let mut failures = 0;
        let mut check = |outs: &[BlockFrame]| {
            faults += 1;
            failures += outs.iter().any(|o| self.logical_error(o) != (0, 0)) as usize;
        };
        let zero = BlockFrame::default();
        let none = StepFaults::default();
        for (encoder, is_plus) in [(&self.pair.plus, true), (&self.pair.zero, false)] {
            for e in compile_fault_effects(encoder)
                .iter()
                .filter(|e| e.accepted())
            {
                let m = (e.output.x.to_u64(), e.output.z.to_u64());
                let (a, b) = if is_plus { (m, (0, 0)) } else { ((0, 0), m) };
                check(&[self.teleport(zero, a, b, &none)]);
            }
        }
        for q in 0..self.n {
            for pauli in 0..15 {
                let bell = StepFaults {
                    bell_cnot: vec![(q, pauli)],
                    ..StepFaults::default()
                };
                check(&[self.teleport(zero, (0, 0), (0, 0), &bell)]);
                let meas = StepFaults {
                    meas_cnot: vec![(q, pauli)],
                    ..StepFaults::default()
                };
                check(&[self.teleport(zero, (0, 0), (0, 0), &meas)]);
                // Fault on the data CNOT, then both blocks teleported.
                let (mut d1, mut d2) = (zero, zero);
                self.faulty_cnot(&mut d1, &mut d2, &[(q, pauli)]);
                let o1 = self.teleport(d1, (0, 0), (0, 0), &none);
                let o2 = self.teleport(d2, (0, 0), (0, 0), &none);
                check(&[o1, o2]);
            }
            let bit = 1u64 << q;
            check(&[self.teleport(
                zero,
                (0, 0),
                (0, 0),
                &StepFaults {
                    meas_d: bit,
                    ..StepFaults::default()
                },
            )]);
            check(&[self.teleport(
                zero,
                (0, 0),
                (0, 0),
                &StepFaults {
                    meas_a: bit,
                    ..StepFaults::default()
                },
            )]);
        }
        (faults, failures)
    }
}

/// Failing pairs of a transversal CNOT layer, each with a uniformly drawn
/// two-qubit Pauli.
fn sample_pair_faults<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let mut sites = Vec::new();
    for_each_failure(n, p, rng, |q| sites.push((q, 0)));
    for site in &mut sites {
        site.1 = rng.random_range(0..15);
    }
    sites
}

/// Logical-CNOT sweep. Each point reports the per-gate rate derived from
/// the shot failure fraction, with the Wilson interval mapped through the
/// same (monotone) estimator; `attempts`/`accepted` count encoder runs.
pub fn run_logical_cnot_benchmark(
    gadget: &Gadget,
    ps: &[f64],
    shots: u64,
    rounds: u32,
    runner: &Runner,
) -> Sweep {
    let points: Vec<SweepPoint> = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let label = format!("cnot {} p={p:e}", gadget.pair.variant);
            let t = runner.run(&label, i, shots, |rng| gadget.cnot_shot(p, rounds, rng));
            cnot_point(p, shots, t, rounds)
        })
        .collect();
    let fit = fit_power_law(&points);
    Sweep { points, fit }
}

/// Number of logical CNOTs in one transversal round.
pub const LOGICAL_CNOTS_PER_ROUND: u32 = 6;

pub fn cnot_point(p: f64, shots: u64, t: Tally, rounds: u32) -> SweepPoint {
    let (lo, hi) = wilson_interval(t.failures, shots);
    let rate = |q: f64| per_gate_rate(q, rounds, LOGICAL_CNOTS_PER_ROUND);
    let p_rounds = if shots == 0 {
        0.0
    } else {
        t.failures as f64 / shots as f64
    };
    SweepPoint {
        p,
        shots,
        failures: t.failures,
        rate: rate(p_rounds),
        ci_lo: rate(lo),
        ci_hi: rate(hi),
        attempts: t.attempts,
        accepted: t.accepted,
    }
}
