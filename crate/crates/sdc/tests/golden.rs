//! Synthesis is deterministic: freshly built artifacts match the checked-in
//! assets byte for byte.

use sdc::formats::{write_circuit, write_lut};
use sdc_core::code::builtin_code;
use sdc_core::decoder::build_lookup;
use sdc_core::synth::*;
use sdc_core::Basis;

fn assert_golden(name: &str, text: &str) {
    let path = format!("{}/assets/circuits/{name}", env!("CARGO_MANIFEST_DIR"));
    let stored = std::fs::read_to_string(&path).unwrap();
    assert!(stored == text, "{name} differs from a fresh synthesis");
}

#[test]
fn circuits_match_assets() {
    let code = builtin_code();
    let opts = SynthOptions::default();
    let b = synth_encoder_bundle(&code, &opts).unwrap();
    let ft = synth_ft_plus_encoder(&code, &opts).unwrap();
    assert_golden("plus_raw.circ", &write_circuit(&b.plus_raw));
    assert_golden("plus_opt.circ", &write_circuit(&b.plus_optimized));
    assert_golden("zero.circ", &write_circuit(&b.zero));
    assert_golden("arbitrary.circ", &write_circuit(&b.arbitrary));
    assert_golden("ft_plus.circ", &write_circuit(&ft.circuit));
    assert_golden(
        "ft_zero.circ",
        &write_circuit(&synth_zero_encoder(&ft.circuit).unwrap()),
    );
    for (v, name) in
        NaiveVariant::ALL
            .into_iter()
            .zip(["naive9.circ", "naive6.circ", "naive4.circ"])
    {
        assert_golden(
            name,
            &write_circuit(&synth_naive_encoder(&code, &b.plus_optimized, v).unwrap()),
        );
    }
}

#[test]
fn lookup_tables_match_assets() {
    let code = builtin_code();
    for (basis, name) in [(Basis::X, "lut_x.bin"), (Basis::Z, "lut_z.bin")] {
        let bytes = write_lut(&build_lookup(&code, basis, 4).unwrap()).unwrap();
        let stored =
            std::fs::read(format!("{}/assets/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap();
        assert!(stored == bytes, "{name} differs from a fresh build");
    }
}
