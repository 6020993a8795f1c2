//! Monte-Carlo experiments: decoder scaling, the logical-CNOT benchmark
//! with error-correcting teleportation, and encoder qubit overhead.
//!
//! Outputs are CSV tables plus a JSON summary. Neither contains timing or
//! worker information, so reruns with the same seed are byte-identical.

mod decoder;
mod ect;
mod encoders;
mod noise;
mod overhead;
mod runner;
mod stats;

pub use decoder::{run_decoder_benchmark, DecoderBench, DEFAULT_W_MAX};
pub use ect::{
    cnot_point, run_logical_cnot_benchmark, BlockFrame, Gadget, Prepared, StepFaults,
    DEFAULT_ROUNDS, LOGICAL_CNOTS_PER_ROUND,
};
pub use encoders::{EncoderPair, EncoderVariant};
pub use noise::{bernoulli_mask, for_each_failure, pair_pauli_bits};
pub use overhead::{estimate_qubit_overhead, OverheadPoint, MAX_ATTEMPTS};
pub use runner::{point_shot_rng, Runner, Tally, MAX_SHOTS};
pub use stats::{
    fit_power_law, per_gate_rate, wilson_interval, FitError, PowerLawFit, SweepPoint, MAX_CI_RATIO,
    MIN_FAILURES,
};

use serde::Serialize;

/// Points of a sweep and the power-law fit over them.
#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub points: Vec<SweepPoint>,
    pub fit: Result<PowerLawFit, FitError>,
}

pub const SWEEP_CSV_HEADER: &str = "p,shots,failures,rate,ci_lo,ci_hi";

pub fn sweep_csv(points: &[SweepPoint]) -> String {
    let mut s = format!("{SWEEP_CSV_HEADER}\n");
    for pt in points {
        s.push_str(&format!(
            "{},{},{},{:.6e},{:.6e},{:.6e}\n",
            pt.p, pt.shots, pt.failures, pt.rate, pt.ci_lo, pt.ci_hi
        ));
    }
    s
}

pub const OVERHEAD_CSV_HEADER: &str = "encoder,p,shots,attempts,qubits_per_attempt,expected_qubits";

pub fn overhead_csv(points: &[OverheadPoint]) -> String {
    let mut s = format!("{OVERHEAD_CSV_HEADER}\n");
    for pt in points {
        s.push_str(&format!(
            "{},{},{},{},{},{:.6}\n",
            pt.encoder, pt.p, pt.shots, pt.attempts, pt.qubits_per_attempt, pt.expected_qubits
        ));
    }
    s
}

/// JSON summary of a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary<'a> {
    pub experiment: &'a str,
    pub encoder: Option<&'a str>,
    pub seed: u64,
    pub shots: u64,
    pub rounds: Option<u32>,
    pub points: &'a [SweepPoint],
    pub fit: Option<&'a PowerLawFit>,
    pub fit_error: Option<String>,
}

impl<'a> SweepSummary<'a> {
    pub fn new(experiment: &'a str, seed: u64, shots: u64, sweep: &'a Sweep) -> Self {
        SweepSummary {
            experiment,
            encoder: None,
            seed,
            shots,
            rounds: None,
            points: &sweep.points,
            fit: sweep.fit.as_ref().ok(),
            fit_error: sweep.fit.as_ref().err().map(ToString::to_string),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}
