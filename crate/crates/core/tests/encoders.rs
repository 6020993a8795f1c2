mod common;

use common::{bundle, code, output_group, prefixed, signed_css};
use proptest::prelude::*;
use sdc_core::circuit::{Circuit, Gate, Pauli1, PauliString};
use sdc_core::code::{derive_logicals, symplectic_double, NonCssSeed, StabilizerCode};
use sdc_core::gf2::{BitMatrix, BitVec};
use sdc_core::synth::overlap::{column_masks, schedule_circuit, schedule_cost, Step};
use sdc_core::synth::reorder::GeneratorTracker;
use sdc_core::synth::*;
use sdc_core::Basis;

fn toy_code() -> StabilizerCode {
    let one = BitMatrix::parse("11").unwrap();
    let code = symplectic_double(&NonCssSeed::new(one.clone(), one).unwrap()).unwrap();
    let (lx, lz) = derive_logicals(&code).unwrap();
    code.with_logicals(lx, lz).unwrap()
}

/// Two disjoint Z checks, so no two controls share a target.
fn disjoint_code() -> StabilizerCode {
    let sx = BitMatrix::parse("1111").unwrap();
    let sz = BitMatrix::parse("1100\n0011").unwrap();
    let code = StabilizerCode::new(sx, sz).unwrap();
    let (lx, lz) = derive_logicals(&code).unwrap();
    code.with_logicals(lx, lz).unwrap()
}

fn plus_group(code: &StabilizerCode) -> sdc_core::sim::StabilizerGroup {
    TargetState::Plus.stabilizer_group(code).unwrap()
}

#[test]
fn raw_plus_encoder_shape() {
    let c = &bundle().plus_raw;
    assert_eq!(c.cnot_count(), 108);
    let prep_z: Vec<usize> = c
        .gates()
        .iter()
        .filter_map(|g| {
            if let Gate::PrepZ(q) = g {
                Some(*q)
            } else {
                None
            }
        })
        .collect();
    let prep_x = c
        .gates()
        .iter()
        .filter(|g| matches!(g, Gate::PrepX(_)))
        .count();
    assert_eq!(prep_z, (0..12).collect::<Vec<_>>());
    assert_eq!(prep_x, 18);
    for g in c.gates() {
        if let Gate::Cnot { control, target } = *g {
            assert!(target < 12 && control >= 12, "{g:?}");
        }
    }
    assert!(overlap::cnots_commute(c));
}

#[test]
fn raw_cnots_follow_reduced_check_matrix() {
    let layout = PlusLayout::new(code());
    let mut expected = Vec::new();
    for (i, &t) in layout.targets.iter().enumerate() {
        for j in 12..30 {
            if layout.reduced.get(i, j) {
                expected.push((j, t));
            }
        }
    }
    let got: Vec<(usize, usize)> = bundle()
        .plus_raw
        .gates()
        .iter()
        .filter_map(|g| {
            if let Gate::Cnot { control, target } = *g {
                Some((control, target))
            } else {
                None
            }
        })
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn plus_encoders_prepare_the_logical_plus_state() {
    let expected = plus_group(code());
    let b = bundle();
    for c in [&b.plus_raw, &b.plus_optimized] {
        assert_eq!(output_group(c, 1), expected);
    }
    let reordered = reorder_for_low_weight(&b.plus_optimized).unwrap();
    assert_eq!(output_group(&reordered.circuit, 1), expected);
}

#[test]
fn output_is_fixed_by_every_stabilizer_and_logical_x() {
    let g = output_group(&bundle().plus_raw, 0);
    let c = code();
    for r in c.sx().rows().iter().chain(c.lx().rows()) {
        assert!(g.contains(&sdc_core::sim::SignedPauli::x_type(r, false)));
    }
    for r in c.sz().rows() {
        assert!(g.contains(&sdc_core::sim::SignedPauli::z_type(r, false)));
    }
    for r in c.lz().rows() {
        assert!(!g.contains(&sdc_core::sim::SignedPauli::z_type(r, false)));
    }
}

#[test]
fn overlap_optimization_reaches_target_count() {
    let n = bundle().plus_optimized.cnot_count();
    assert!((67..=80).contains(&n), "{n}");
    assert_eq!(n, 67);
}

#[test]
fn overlap_optimization_is_deterministic() {
    let again = overlap_optimize(code(), &bundle().plus_raw, &AnnealOptions::default()).unwrap();
    assert_eq!(again, bundle().plus_optimized);
}

#[test]
fn disjoint_checks_give_no_reduction() {
    let code = disjoint_code();
    let raw = synth_plus_encoder(&code).unwrap();
    assert_eq!(raw.cnot_count(), 2);
    let opt = overlap_optimize(&code, &raw, &AnnealOptions::default()).unwrap();
    assert_eq!(opt.cnot_count(), 2);
    assert_eq!(output_group(&opt, 0), plus_group(&code));
}

#[test]
fn toy_code_plus_encoder() {
    // sx = sz = (1111): one Z check with pivot 0 fed by the other three
    // qubits.
    let code = toy_code();
    let c = synth_plus_encoder(&code).unwrap();
    let cnots: Vec<&Gate> = c.gates().iter().filter(|g| g.is_cnot()).collect();
    assert_eq!(
        cnots,
        [
            &Gate::Cnot {
                control: 1,
                target: 0
            },
            &Gate::Cnot {
                control: 2,
                target: 0
            },
            &Gate::Cnot {
                control: 3,
                target: 0
            }
        ]
    );
    assert_eq!(output_group(&c, 0), plus_group(&code));
}

#[test]
fn greedy_schedule_saves_on_shared_targets() {
    // Controls 0 and 1 share rows {0, 1, 2}: fan out from control 0, merge
    // into control 1, and add row 3 directly.
    let cols = [0b0111u64, 0b1111];
    let steps = overlap::greedy_schedule(&cols);
    assert_eq!(schedule_cost(&cols, &steps), 5);
    assert!(schedule_cost(&cols, &[]) == 7);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Any overlap schedule, completed with the missing direct CNOTs,
    /// prepares the same state as the raw encoder.
    #[test]
    fn every_schedule_prepares_the_same_state(raw in proptest::collection::vec((any::<bool>(), 0usize..18, 0usize..18), 0..24)) {
        let layout = PlusLayout::new(code());
        let steps: Vec<Step> = raw
            .iter()
            .filter_map(|&(fan, a, b)| {
                if fan {
                    Some(Step::Fan { control: a, row: b % 12 })
                } else {
                    (a != b).then_some(Step::Merge { control: a, target: b })
                }
            })
            .collect();
        let c = schedule_circuit(code(), &layout, &steps).unwrap();
        prop_assert_eq!(c.cnot_count(), schedule_cost(&column_masks(&layout), &steps));
        prop_assert_eq!(output_group(&c, 0), plus_group(code()));
    }
}

#[test]
fn reorder_boundary_and_weights() {
    let r = reorder_for_low_weight(&bundle().plus_optimized).unwrap();
    assert!(r.boundary > 0);
    assert_eq!(r.circuit.cnot_count(), bundle().plus_optimized.cnot_count());
    // Independent replay of the instantaneous generators.
    let mut t = GeneratorTracker::from_preparations(&r.circuit);
    let mut seen = 0;
    for g in r.circuit.gates() {
        if let Gate::Cnot { control, target } = *g {
            if seen == r.boundary {
                break;
            }
            t.cnot(control, target);
            assert!(t.max_weight() < reorder::EARLY_STAGE_WEIGHT);
            seen += 1;
        }
    }
    let gate = &r.circuit.gates()[r.boundary_gate];
    if let Gate::Cnot { control, target } = *gate {
        assert!(t.max_weight_after(control, target) >= reorder::EARLY_STAGE_WEIGHT);
    }
}

#[test]
fn light_circuit_is_entirely_early_and_harmless() {
    let code = disjoint_code();
    let c = synth_plus_encoder(&code).unwrap();
    let r = reorder_for_low_weight(&c).unwrap();
    assert_eq!(r.boundary, 2);
    assert_eq!(r.boundary_gate, r.circuit.gates().len());
    let audit = audit_single_faults(&r.circuit, &code, TargetState::Plus, Basis::Z).unwrap();
    assert!(audit.harmful.is_empty());
}

#[test]
fn empty_circuit_has_no_harmful_faults() {
    let c = Circuit::new(30);
    let report = audit_single_faults(&c, code(), TargetState::Plus, Basis::Z).unwrap();
    assert_eq!(report.total_locations, 0);
    assert!(report.harmful.is_empty());
}

#[test]
fn zero_encoder_prepares_logical_zero() {
    let c = code();
    let z = &bundle().zero;
    assert_eq!(
        output_group(z, 0),
        TargetState::Zero.stabilizer_group(c).unwrap()
    );
}

#[test]
fn logical_hadamard_layer_swaps_halves() {
    // A logical Z_i before the layer (a |-> on logical i) ends up as a
    // |1> on logical i + 3.
    let c = code();
    for i in 0..6 {
        let mut plus = bundle().plus_optimized.clone();
        let mut p = PauliString::identity(30);
        for q in c.lz().row(i).iter_ones() {
            p.set(q, Pauli1::Z);
        }
        plus.push(Gate::Pauli(p)).unwrap();
        let z = synth_zero_encoder(&plus).unwrap();
        let g = output_group(&z, 0);
        let j = (i + 3) % 6;
        let lz: Vec<(BitVec, bool)> = c
            .lz()
            .rows()
            .iter()
            .enumerate()
            .map(|(k, r)| (r.clone(), k == j))
            .collect();
        let expected = signed_css_z(c, &lz);
        assert_eq!(g, expected, "logical {i}");
    }
}

fn signed_css_z(c: &StabilizerCode, lz: &[(BitVec, bool)]) -> sdc_core::sim::StabilizerGroup {
    let gens = c
        .sx()
        .rows()
        .iter()
        .map(|r| sdc_core::sim::SignedPauli::x_type(r, false))
        .chain(
            c.sz()
                .rows()
                .iter()
                .map(|r| sdc_core::sim::SignedPauli::z_type(r, false)),
        )
        .chain(
            lz.iter()
                .map(|(r, s)| sdc_core::sim::SignedPauli::z_type(r, *s)),
        )
        .collect();
    sdc_core::sim::StabilizerGroup::from_generators(30, gens).unwrap()
}

const PRINTED_M_PRIME: [&str; 3] = [
    "100101101011011000",
    "010010011001011000",
    "001001100000011000",
];

#[test]
fn mz_prime_matches_printed_block() {
    let mz = derive_mz_prime(code()).unwrap();
    assert_eq!(mz.shape(), (6, 30));
    for (r, printed) in PRINTED_M_PRIME.iter().enumerate() {
        let row = mz.row(r);
        assert!((0..12).all(|q| !row.get(q)));
        let tail: String = (12..30)
            .map(|q| if row.get(q) { '1' } else { '0' })
            .collect();
        assert_eq!(&tail, printed, "row {}", r + 1);
    }
    let m = sdc_core::code::builtin_logical_block();
    for r in 0..3 {
        let row = mz.row(3 + r);
        assert!((0..15).all(|q| !row.get(q)));
        assert_eq!(row.slice(15, 15), *m.row(r));
    }
}

#[test]
fn mz_prime_rows_are_equivalent_logicals() {
    let c = code();
    let mz = derive_mz_prime(c).unwrap();
    assert!(c.sx().mat_mul(&mz.transpose()).unwrap().is_zero());
    assert_eq!(
        c.lx().mat_mul(&mz.transpose()).unwrap(),
        BitMatrix::identity(6)
    );
    for (a, b) in mz.rows().iter().zip(c.lz().rows()) {
        assert!(c.sz().row_space_contains(&a.xor(b)));
    }
}

#[test]
fn arbitrary_encoder_inputs() {
    let a = &bundle().arbitrary;
    assert_eq!(a.inputs(), &[12, 13, 14, 27, 28, 29]);
    for &q in a.inputs() {
        assert!(!a
            .gates()
            .iter()
            .any(|g| matches!(g, Gate::PrepX(p) | Gate::PrepZ(p) if *p == q)));
    }
}

#[test]
fn arbitrary_encoder_maps_all_sign_patterns() {
    let c = code();
    let a = &bundle().arbitrary;
    let inputs = a.inputs().to_vec();
    for pattern in 0u32..64 {
        let circuit = prefixed(a, |p| {
            for (r, &q) in inputs.iter().enumerate() {
                p.prep_x(q).unwrap();
                if pattern >> r & 1 == 1 {
                    let mut z = PauliString::identity(30);
                    z.set(q, Pauli1::Z);
                    p.push(Gate::Pauli(z)).unwrap();
                }
            }
        });
        let mut x_rows: Vec<(BitVec, bool)> =
            c.sx().rows().iter().map(|r| (r.clone(), false)).collect();
        x_rows.extend(
            c.lx()
                .rows()
                .iter()
                .enumerate()
                .map(|(r, row)| (row.clone(), pattern >> r & 1 == 1)),
        );
        let expected = signed_css(&x_rows, c.sz().rows(), 30);
        assert_eq!(output_group(&circuit, 0), expected, "pattern {pattern:06b}");
    }
}
