//! Code-capacity benchmark of the X-basis lookup decoder: the logical
//! all-plus state suffers independent Z flips, is measured ideally in the
//! X basis and decoded; a shot fails iff any logical value flips.

use rand::Rng;
use sdc_core::code::StabilizerCode;
use sdc_core::decoder::{build_lookup, residual_logical_flips, row_masks, LookupTable};
use sdc_core::Basis;

use super::noise::bernoulli_mask;
use super::runner::{point_shot_rng, Runner, Tally};
use super::stats::{fit_power_law, SweepPoint};
use super::Sweep;
use crate::formats::ShotDump;

/// Enumeration cap of the tables.
pub const DEFAULT_W_MAX: usize = 4;

pub struct DecoderBench {
    table: LookupTable,
    logical_masks: Vec<u64>,
    n: usize,
}

impl DecoderBench {
    pub fn new(code: &StabilizerCode) -> sdc_core::Result<Self> {
        Ok(DecoderBench {
            table: build_lookup(code, Basis::X, DEFAULT_W_MAX)?,
            logical_masks: row_masks(code.lx()),
            n: code.n(),
        })
    }

    pub fn table(&self) -> &LookupTable {
        &self.table
    }

    /// Logical flips (bit `i` = logical `i`) left by a Z error pattern.
    pub fn logical_flips(&self, error: u64) -> u64 {
        residual_logical_flips(&self.table, &self.logical_masks, error)
    }

    /// Z error pattern of one shot. The X-basis outcomes of the shot are
    /// the noiseless outcomes XOR this pattern.
    pub fn sample_error<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> u64 {
        bernoulli_mask(self.n, p, rng)
    }

    pub fn shot<R: Rng + ?Sized>(&self, p: f64, rng: &mut R) -> bool {
        self.logical_flips(self.sample_error(p, rng)) != 0
    }

    /// Outcome flips of the first `shots` shots of sweep point `point`.
    pub fn dump(&self, seed: u64, point: usize, p: f64, shots: u64) -> ShotDump {
        let records = (0..shots)
            .map(|s| self.sample_error(p, &mut point_shot_rng(seed, point, s)))
            .collect();
        ShotDump {
            n: self.n as u32,
            records,
        }
    }

    /// Failures when re-decoding a dump.
    pub fn redecode(&self, dump: &ShotDump) -> u64 {
        dump.records
            .iter()
            .filter(|&&e| self.logical_flips(e) != 0)
            .count() as u64
    }
}

pub fn run_decoder_benchmark(
    bench: &DecoderBench,
    ps: &[f64],
    shots: u64,
    runner: &Runner,
) -> Sweep {
    let points: Vec<SweepPoint> = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let t = runner.run(&format!("decoder p={p:e}"), i, shots, |rng| Tally {
                failures: bench.shot(p, rng) as u64,
                ..Tally::default()
            });
            SweepPoint::from_counts(p, shots, t.failures, 0, 0)
        })
        .collect();
    let fit = fit_power_law(&points);
    Sweep { points, fit }
}
