//! Encoder synthesis and the fault audits behind it.
//!
//! Pipeline for the fault-tolerant plus encoder:
//! raw encoder -> overlap optimization -> low-weight reordering -> Z-error
//! audit -> verification ancillas -> two-block protocol.

pub mod arbitrary;
pub mod audit;
pub mod overlap;
pub mod plus;
pub mod protocols;
pub mod reorder;
pub mod verify;

use alloc::vec::Vec;

pub use arbitrary::{derive_mz_prime, input_qubits, synth_arbitrary_encoder};
pub use audit::{
    audit_ft_contract, audit_single_faults, ContractReport, ContractViolation, FaultAuditReport,
    HarmfulFault, ResidualClassifier, TargetState,
};
pub use overlap::{overlap_optimize, AnnealOptions};
pub use plus::{synth_plus_encoder, PlusLayout};
pub use protocols::{synth_naive_encoder, synth_zero_encoder, NaiveVariant};
pub use reorder::{reorder_for_low_weight, Reordered};
pub use verify::{synth_verification, VerificationPlan, DEFAULT_WEIGHT_CAP};

use crate::circuit::Circuit;
use crate::code::StabilizerCode;
use crate::{Basis, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthOptions {
    pub anneal: AnnealOptions,
    /// Largest weight of a measured verification operator.
    pub weight_cap: usize,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            anneal: AnnealOptions::default(),
            weight_cap: DEFAULT_WEIGHT_CAP,
        }
    }
}

/// The non-fault-tolerant encoders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncoderBundle {
    pub plus_raw: Circuit,
    pub plus_optimized: Circuit,
    pub zero: Circuit,
    pub arbitrary: Circuit,
}

impl EncoderBundle {
    pub fn cnot_counts(&self) -> Vec<(&'static str, usize)> {
        alloc::vec![
            ("plus_raw", self.plus_raw.cnot_count()),
            ("plus_optimized", self.plus_optimized.cnot_count()),
            ("zero", self.zero.cnot_count()),
            ("arbitrary", self.arbitrary.cnot_count()),
        ]
    }
}

pub fn synth_encoder_bundle(code: &StabilizerCode, opts: &SynthOptions) -> Result<EncoderBundle> {
    let plus_raw = synth_plus_encoder(code)?;
    let plus_optimized = overlap_optimize(code, &plus_raw, &opts.anneal)?;
    let zero = synth_zero_encoder(&plus_optimized)?;
    let arbitrary = synth_arbitrary_encoder(code)?;
    Ok(EncoderBundle {
        plus_raw,
        plus_optimized,
        zero,
        arbitrary,
    })
}

/// The fault-tolerant plus encoder and its intermediate artifacts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FtPlusEncoder {
    /// Optimized encoder after reordering.
    pub reordered: Reordered,
    /// Z-error audit of the reordered encoder.
    pub audit: FaultAuditReport,
    pub plan: VerificationPlan,
    /// One verified block (encoder plus verification ancillas).
    pub verified: Circuit,
    /// Full two-block protocol; output block `block1`.
    pub circuit: Circuit,
}

pub fn synth_ft_plus_encoder(code: &StabilizerCode, opts: &SynthOptions) -> Result<FtPlusEncoder> {
    let raw = synth_plus_encoder(code)?;
    let optimized = overlap_optimize(code, &raw, &opts.anneal)?;
    let reordered = reorder_for_low_weight(&optimized)?;
    let audit = audit_single_faults(&reordered.circuit, code, TargetState::Plus, Basis::Z)?;
    let (verified, plan) = synth_verification(&reordered.circuit, code, &audit, opts.weight_cap)?;
    let circuit = protocols::two_block_protocol(code, &verified)?;
    Ok(FtPlusEncoder {
        reordered,
        audit,
        plan,
        verified,
        circuit,
    })
}
