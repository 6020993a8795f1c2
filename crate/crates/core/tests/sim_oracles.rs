mod common;

use common::{bundle, code, ft_plus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdc_core::circuit::{enumerate_fault_locations, Circuit, Gate, Pauli1, PauliString, Timing};
use sdc_core::sim::frame::{check_flips, propagate, restrict};
use sdc_core::sim::{
    run_with_fault_sampled, shot_rng, simulate, Expectation, FaultSampler, NoiseModel, Tableau,
};
use sdc_core::synth::{synth_naive_encoder, NaiveVariant, TargetState};

fn prefix(c: &Circuit, len: usize) -> Circuit {
    let mut p = Circuit::new(c.num_qubits());
    for g in &c.gates()[..len] {
        p.push(g.clone()).unwrap();
    }
    p
}

fn noiseless_state(c: &Circuit) -> Tableau {
    run_with_fault_sampled(c, None, &mut shot_rng(0, 0)).state
}

/// Unitary prefixes of encoders: the faulty state equals the frame applied
/// to the ideal state.
#[test]
fn frame_matches_tableau_on_encoder_prefixes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let b = bundle();
    let circuits = [&b.plus_raw, &b.plus_optimized, &ft_plus().reordered.circuit];
    for k in 0..500 {
        let c = circuits[k % circuits.len()];
        let p = prefix(c, rng.random_range(1..=c.gates().len()));
        let locations = enumerate_fault_locations(&p);
        let loc = locations[rng.random_range(0..locations.len())];
        let (_, frame) = propagate(
            &p,
            loc.gate_index,
            loc.timing,
            &loc.fault.to_string_on(p.num_qubits()),
        );
        let faulty = run_with_fault_sampled(&p, Some(&loc), &mut shot_rng(0, 0)).state;
        let mut ideal = noiseless_state(&p);
        ideal.apply_pauli(&frame);
        assert_eq!(
            faulty.stabilizer_group(),
            ideal.stabilizer_group(),
            "{loc:?}"
        );
    }
}

/// Full protocols with measurements: check flips agree, and undoing the
/// frame residual on the output block restores the ideal output state.
#[test]
fn frame_matches_tableau_on_protocols() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let naive4 =
        synth_naive_encoder(code(), &bundle().plus_optimized, NaiveVariant::Copies4).unwrap();
    let circuits = [&ft_plus().verified, &ft_plus().circuit, &naive4];
    let ideal = TargetState::Plus.stabilizer_group(code()).unwrap();
    for k in 0..500 {
        let c = circuits[k % circuits.len()];
        let locations = enumerate_fault_locations(c);
        let loc = locations[rng.random_range(0..locations.len())];
        let (flips, frame) = propagate(
            c,
            loc.gate_index,
            loc.timing,
            &loc.fault.to_string_on(c.num_qubits()),
        );
        let b = run_with_fault_sampled(c, Some(&loc), &mut shot_rng(k as u64, 0));
        assert_eq!(b.outcome.checks, check_flips(c, &flips), "{loc:?}");
        let mut t = b.state.clone();
        let mut undo = PauliString::identity(c.num_qubits());
        let residual = restrict(&frame, c.output_range());
        for q in 0..30 {
            undo.set(c.output_range().start + q, residual.get(q));
        }
        t.apply_pauli(&undo);
        let got = t
            .stabilizer_group()
            .restrict(c.output_range())
            .expect("output unentangled");
        assert_eq!(got, ideal, "{loc:?}");
    }
}

#[test]
fn cnot_fault_frequencies() {
    // Identify the sampled two-qubit Pauli from two runs that share the
    // random stream: |00> reveals the X part, |++> the Z part.
    let mut on_zero = Circuit::new(2);
    on_zero.cnot(0, 1).unwrap();
    let mut on_plus = Circuit::new(2);
    on_plus.h(0).unwrap();
    on_plus.h(1).unwrap();
    on_plus.cnot(0, 1).unwrap();
    on_plus.h(0).unwrap();
    on_plus.h(1).unwrap();
    let noise = NoiseModel::new(0.15).unwrap();
    let shots = 1_000_000u64;
    let mut counts = [0u64; 16];
    let z = |q: usize| {
        let mut p = PauliString::identity(2);
        p.set(q, Pauli1::Z);
        p
    };
    for s in 0..shots {
        let (_, a) = simulate(&on_zero, &noise, &mut shot_rng(5, s));
        let (_, b) = simulate(&on_plus, &noise, &mut shot_rng(5, s));
        // After CNOT|00> = |00>, an X on qubit q flips Z_q; in the Hadamard
        // frame a Z on qubit q flips Z_q as well.
        let bit = |t: &Tableau, q: usize| t.expectation(&z(q)) == Expectation::Minus;
        let idx = (bit(&a, 0) as usize) << 3
            | (bit(&b, 0) as usize) << 2
            | (bit(&a, 1) as usize) << 1
            | bit(&b, 1) as usize;
        counts[idx] += 1;
    }
    let p = 0.01;
    let sigma = (shots as f64 * p * (1.0 - p)).sqrt();
    for (idx, &n) in counts.iter().enumerate().skip(1) {
        assert!(
            (n as f64 - shots as f64 * p).abs() <= 3.0 * sigma,
            "pauli {idx:04b}: {n}"
        );
    }
    assert!(
        (counts[0] as f64 - shots as f64 * 0.85).abs() <= 3.0 * (shots as f64 * 0.85 * 0.15).sqrt()
    );
}

#[test]
fn logical_x_is_deterministic_on_plus_state() {
    let t = noiseless_state(&bundle().plus_optimized);
    for r in code().lx().rows() {
        let mut p = PauliString::identity(30);
        for q in r.iter_ones() {
            p.set(q, Pauli1::X);
        }
        assert_eq!(t.expectation(&p), Expectation::Plus);
    }
    let mut zl = PauliString::identity(30);
    for q in code().lz().row(1).iter_ones() {
        zl.set(q, Pauli1::Z);
    }
    assert_eq!(t.expectation(&zl), Expectation::Random);
}

#[test]
fn frame_sampler_agrees_with_tableau_monte_carlo() {
    let c = &ft_plus().verified;
    let p = 0.01;
    let shots = 20_000u64;
    let sampler = FaultSampler::new(c);
    let frame_acc = (0..shots)
        .filter(|&s| sampler.sample(p, &mut shot_rng(1, s)).accepted)
        .count() as f64;
    let noise = NoiseModel::new(p).unwrap();
    let tab_acc = (0..shots)
        .filter(|&s| simulate(c, &noise, &mut shot_rng(2, s)).0.accepted())
        .count() as f64;
    let (a, b) = (frame_acc / shots as f64, tab_acc / shots as f64);
    let sigma = (a * (1.0 - a) / shots as f64 + b * (1.0 - b) / shots as f64).sqrt();
    assert!((a - b).abs() <= 4.0 * sigma, "{a} vs {b}");
}

#[test]
fn noise_acts_after_cnots_and_before_measurements() {
    for (i, g) in ft_plus().circuit.gates().iter().enumerate().take(200) {
        for f in sdc_core::circuit::faults_at(i, g) {
            match g {
                Gate::MeasZ(_) | Gate::MeasX(_) => assert_eq!(f.timing, Timing::Before),
                Gate::Cnot { .. } | Gate::PrepX(_) | Gate::PrepZ(_) => {
                    assert_eq!(f.timing, Timing::After)
                }
                _ => panic!("unexpected noisy gate {g:?}"),
            }
        }
    }
}
