//! Physical-qubit cost of preparing one accepted logical all-zero block.
//!
//! Every attempt consumes the full register of the preparation circuit
//! (data blocks and checking qubits alike); a rejected attempt is
//! discarded whole and restarted. The cost of one accepted block is
//! therefore `qubits_per_attempt x attempts`, cumulative over restarts.

use sdc_core::sim::FaultSampler;
use serde::Serialize;

use super::runner::{Runner, Tally};

/// Attempts after which a shot gives up (counted as unaccepted).
pub const MAX_ATTEMPTS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OverheadPoint {
    pub encoder: String,
    pub p: f64,
    /// Accepted blocks requested.
    pub shots: u64,
    pub attempts: u64,
    pub accepted: u64,
    pub qubits_per_attempt: usize,
    /// Mean qubits consumed per accepted block.
    pub expected_qubits: f64,
}

pub fn estimate_qubit_overhead(
    encoder: &str,
    zero: &FaultSampler,
    p: f64,
    shots: u64,
    point: usize,
    runner: &Runner,
) -> OverheadPoint {
    let t = runner.run(
        &format!("overhead {encoder} p={p:e}"),
        point,
        shots,
        |rng| {
            let mut t = Tally::default();
            while t.attempts < MAX_ATTEMPTS {
                t.attempts += 1;
                if zero.sample(p, rng).accepted {
                    t.accepted = 1;
                    break;
                }
            }
            t
        },
    );
    let qubits = zero.qubits_per_attempt();
    OverheadPoint {
        encoder: encoder.to_string(),
        p,
        shots,
        attempts: t.attempts,
        accepted: t.accepted,
        qubits_per_attempt: qubits,
        expected_qubits: if t.accepted == 0 {
            f64::INFINITY
        } else {
            (qubits as u64 * t.attempts) as f64 / t.accepted as f64
        },
    }
}
