//! Encoder variants compared by the benchmarks.

use std::fmt;
use std::str::FromStr;

use sdc_core::circuit::Circuit;
use sdc_core::code::StabilizerCode;
use sdc_core::synth::{
    overlap_optimize, synth_ft_plus_encoder, synth_naive_encoder, synth_plus_encoder,
    synth_zero_encoder, NaiveVariant, SynthOptions,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncoderVariant {
    /// Two verified blocks compared by a transversal CNOT.
    Proposed,
    Naive(NaiveVariant),
}

impl EncoderVariant {
    pub const ALL: [EncoderVariant; 4] = [
        EncoderVariant::Proposed,
        EncoderVariant::Naive(NaiveVariant::Copies9),
        EncoderVariant::Naive(NaiveVariant::Copies6),
        EncoderVariant::Naive(NaiveVariant::Copies4),
    ];

    pub fn name(self) -> &'static str {
        match self {
            EncoderVariant::Proposed => "proposed",
            EncoderVariant::Naive(NaiveVariant::Copies9) => "9copy",
            EncoderVariant::Naive(NaiveVariant::Copies6) => "6copy",
            EncoderVariant::Naive(NaiveVariant::Copies4) => "4copy",
        }
    }
}

impl fmt::Display for EncoderVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EncoderVariant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        EncoderVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| {
                format!("unknown encoder {s:?} (expected proposed, 9copy, 6copy or 4copy)")
            })
    }
}

/// Fault-tolerant plus- and zero-state preparations of one variant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncoderPair {
    pub variant: EncoderVariant,
    pub plus: Circuit,
    pub zero: Circuit,
}

impl EncoderPair {
    pub fn build(
        code: &StabilizerCode,
        variant: EncoderVariant,
        opts: &SynthOptions,
    ) -> sdc_core::Result<Self> {
        let plus = match variant {
            EncoderVariant::Proposed => synth_ft_plus_encoder(code, opts)?.circuit,
            EncoderVariant::Naive(v) => {
                let optimized = overlap_optimize(code, &synth_plus_encoder(code)?, &opts.anneal)?;
                synth_naive_encoder(code, &optimized, v)?
            }
        };
        let zero = synth_zero_encoder(&plus)?;
        Ok(EncoderPair {
            variant,
            plus,
            zero,
        })
    }
}
