#![allow(dead_code)]

use std::sync::OnceLock;

use sdc_core::circuit::Circuit;
use sdc_core::code::{builtin_code, StabilizerCode};
use sdc_core::gf2::BitVec;
use sdc_core::sim::{run_with_fault_sampled, shot_rng, SignedPauli, StabilizerGroup};
use sdc_core::synth::{
    synth_encoder_bundle, synth_ft_plus_encoder, EncoderBundle, FtPlusEncoder, SynthOptions,
};

pub fn code() -> &'static StabilizerCode {
    static CODE: OnceLock<StabilizerCode> = OnceLock::new();
    CODE.get_or_init(builtin_code)
}

pub fn bundle() -> &'static EncoderBundle {
    static BUNDLE: OnceLock<EncoderBundle> = OnceLock::new();
    BUNDLE.get_or_init(|| synth_encoder_bundle(code(), &SynthOptions::default()).unwrap())
}

pub fn ft_plus() -> &'static FtPlusEncoder {
    static FT: OnceLock<FtPlusEncoder> = OnceLock::new();
    FT.get_or_init(|| synth_ft_plus_encoder(code(), &SynthOptions::default()).unwrap())
}

/// Noiseless output-block state of `c`, following one measurement branch.
pub fn output_group(c: &Circuit, seed: u64) -> StabilizerGroup {
    let b = run_with_fault_sampled(c, None, &mut shot_rng(seed, 0));
    assert!(b.outcome.accepted(), "noiseless run rejected");
    b.state
        .stabilizer_group()
        .restrict(c.output_range())
        .expect("output block is unentangled")
}

/// CSS state group with per-row signs for the X-type rows.
pub fn signed_css(x_rows: &[(BitVec, bool)], z_rows: &[BitVec], n: usize) -> StabilizerGroup {
    let gens = x_rows
        .iter()
        .map(|(r, s)| SignedPauli::x_type(r, *s))
        .chain(z_rows.iter().map(|r| SignedPauli::z_type(r, false)))
        .collect();
    StabilizerGroup::from_generators(n, gens).unwrap()
}

/// Circuit that prepares `prefix` gates and then runs `c` on the same
/// register.
pub fn prefixed(c: &Circuit, prefix: impl FnOnce(&mut Circuit)) -> Circuit {
    let mut out = Circuit::new(c.num_qubits());
    prefix(&mut out);
    out.append_shifted(c, 0, "").unwrap();
    if let Some(name) = c.output_block() {
        out.set_output(name).unwrap();
    }
    out
}
