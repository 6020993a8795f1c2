use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdc::experiments::*;
use sdc_core::code::{builtin_code, StabilizerCode};
use sdc_core::decoder::row_masks;
use sdc_core::synth::SynthOptions;

fn code() -> &'static StabilizerCode {
    static C: OnceLock<StabilizerCode> = OnceLock::new();
    C.get_or_init(builtin_code)
}

fn gadget() -> &'static Gadget {
    static G: OnceLock<Gadget> = OnceLock::new();
    G.get_or_init(|| {
        let pair =
            EncoderPair::build(code(), EncoderVariant::Proposed, &SynthOptions::default()).unwrap();
        Gadget::new(code(), pair).unwrap()
    })
}

fn bench() -> &'static DecoderBench {
    static B: OnceLock<DecoderBench> = OnceLock::new();
    B.get_or_init(|| DecoderBench::new(code()).unwrap())
}

fn runner(workers: usize) -> Runner {
    Runner::new(17, workers, false).unwrap()
}

fn exact_point(p: f64, rate: f64) -> SweepPoint {
    SweepPoint {
        p,
        shots: 1 << 40,
        failures: 1 << 20,
        rate,
        ci_lo: rate * 0.99,
        ci_hi: rate * 1.01,
        attempts: 0,
        accepted: 0,
    }
}

// ---- statistics -----------------------------------------------------------

#[test]
fn fit_recovers_synthetic_exponents() {
    for (a, c) in [(3.0, 50.0), (2.0, 7.0), (1.0, 0.3)] {
        let points: Vec<_> = [1e-3, 2e-3, 5e-3, 1e-2]
            .iter()
            .map(|&p| exact_point(p, c * f64::powf(p, a)))
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert!((fit.exponent - a).abs() < 1e-9, "{fit:?}");
        assert!((fit.prefactor / c - 1.0).abs() < 1e-9);
        assert!(fit.exponent_stderr < 1e-9);
        assert_eq!(fit.used, vec![0, 1, 2, 3]);
    }
}

#[test]
fn fit_with_sampling_noise() {
    // Counts drawn from 50 p^3 with a million shots: the exponent lands
    // within a few standard errors of 3.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let shots = 1_000_000u64;
    let points: Vec<_> = [0.01, 0.02, 0.03, 0.05]
        .iter()
        .map(|&p| {
            let q = 50.0 * f64::powi(p, 3);
            let failures = (0..shots).filter(|_| rng.random::<f64>() < q).count() as u64;
            SweepPoint::from_counts(p, shots, failures, 0, 0)
        })
        .collect();
    let fit = fit_power_law(&points).unwrap();
    assert!((fit.exponent - 3.0).abs() < 0.1, "{fit:?}");
    assert!((fit.exponent - 3.0).abs() < 4.0 * fit.exponent_stderr.max(0.01));
}

#[test]
fn fit_skips_unusable_points() {
    let mut points: Vec<_> = [1e-3, 2e-3, 5e-3]
        .iter()
        .map(|&p| exact_point(p, p * p))
        .collect();
    points.push(SweepPoint::from_counts(1e-4, 1000, 0, 0, 0));
    points.push(SweepPoint::from_counts(2e-4, 1000, 3, 0, 0));
    let fit = fit_power_law(&points).unwrap();
    assert_eq!(fit.used, vec![0, 1, 2]);
    assert!((fit.exponent - 2.0).abs() < 1e-9);
    let err = fit_power_law(&points[2..]).unwrap_err();
    assert_eq!((err.usable, err.total), (1, 3));
    assert!(fit_power_law(&[]).is_err());
}

#[test]
fn per_gate_estimator_example() {
    let p1 = 1.0 - f64::powf(0.5, 0.1);
    assert!((p1 - 0.066967).abs() < 1e-6);
    let p_gate = per_gate_rate(0.5, 10, 6);
    assert!((p_gate - (1.0 - f64::powf(1.0 - p1, 1.0 / 6.0))).abs() < 1e-15);
    assert!((p_gate - 0.011481).abs() < 1e-5, "{p_gate}");
    assert_eq!(per_gate_rate(0.0, 10, 6), 0.0);
    assert_eq!(per_gate_rate(1.0, 10, 6), 1.0);
}

proptest! {
    #[test]
    fn per_gate_estimator_is_monotone(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(per_gate_rate(lo, 10, 6) <= per_gate_rate(hi, 10, 6));
        // Small rates split evenly over the 60 gates.
        prop_assert!(per_gate_rate(lo * 1e-3, 10, 6) <= lo * 1e-3 / 60.0 * 1.01);
    }

    #[test]
    fn wilson_contains_the_estimate(shots in 1u64..100_000, frac in 0.0f64..=1.0) {
        let failures = (shots as f64 * frac) as u64;
        let (lo, hi) = wilson_interval(failures, shots);
        let r = failures as f64 / shots as f64;
        prop_assert!(0.0 <= lo && lo <= r + 1e-12 && r <= hi + 1e-12 && hi <= 1.0);
    }
}

// ---- decoder benchmark ----------------------------------------------------

#[test]
fn decoder_corrects_every_pattern_up_to_weight_two() {
    let b = bench();
    assert_eq!(b.logical_flips(0), 0);
    for i in 0..30 {
        for j in i..30 {
            assert_eq!(b.logical_flips(1 << i | 1 << j), 0, "{i} {j}");
        }
    }
}

#[test]
fn three_fifths_of_a_weight_five_logical_fails() {
    // The syndrome of three qubits of a weight-5 logical equals that of the
    // remaining two, which is the unique correction of weight at most 2.
    let masks = row_masks(code().lx());
    let l = *masks.iter().find(|m| m.count_ones() == 5).unwrap();
    let qubits: Vec<u32> = (0..30).filter(|q| l >> q & 1 == 1).collect();
    let three = qubits[..3].iter().fold(0u64, |m, &q| m | 1 << q);
    assert_ne!(bench().logical_flips(three), 0);
    assert_eq!(
        bench().logical_flips(l),
        bench().logical_flips(three) ^ bench().logical_flips(l ^ three)
    );
}

#[test]
fn decoder_benchmark_without_noise_never_fails() {
    let s = run_decoder_benchmark(bench(), &[0.0], 10_000, &runner(1));
    assert_eq!(s.points[0].failures, 0);
    assert!(s.fit.is_err());
}

#[test]
fn dumps_redecode_to_the_sweep_counts() {
    let p = 0.05;
    let shots = 20_000;
    let s = run_decoder_benchmark(bench(), &[0.01, p], shots, &runner(2));
    let dump = bench().dump(17, 1, p, shots);
    assert_eq!(dump.records.len() as u64, shots);
    assert_eq!(bench().redecode(&dump), s.points[1].failures);
    // Mean error weight is n p.
    let mean = dump
        .records
        .iter()
        .map(|r| r.count_ones() as f64)
        .sum::<f64>()
        / shots as f64;
    assert!((mean - 1.5).abs() < 0.05, "{mean}");
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let ps = [0.02, 0.05];
    let a = run_decoder_benchmark(bench(), &ps, 30_000, &runner(1));
    let b = run_decoder_benchmark(bench(), &ps, 30_000, &runner(3));
    assert_eq!(sweep_csv(&a.points), sweep_csv(&b.points));
    let g = gadget();
    let c1 = runner(1).run("x", 0, 300, |rng| g.cnot_shot(5e-3, 2, rng));
    let c3 = runner(3).run("x", 0, 300, |rng| g.cnot_shot(5e-3, 2, rng));
    assert_eq!(c1, c3);
}

// ---- teleportation and the CNOT benchmark ---------------------------------

fn masks_of(m: &sdc_core::gf2::BitMatrix) -> Vec<u64> {
    row_masks(m)
}

fn combo(rows: &[u64], pick: u64) -> u64 {
    rows.iter()
        .enumerate()
        .filter(|(i, _)| pick >> i & 1 == 1)
        .fold(0, |a, (_, r)| a ^ r)
}

#[test]
fn noiseless_teleport_is_identity_on_frames() {
    let g = gadget();
    let none = StepFaults::default();
    for lx in [0u64, 1, 0b101010, 63] {
        for lz in [0u64, 2, 0b010101] {
            let d = BlockFrame {
                lx,
                lz,
                ..BlockFrame::default()
            };
            assert_eq!(g.teleport(d, (0, 0), (0, 0), &none), d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Teleportation preserves the logical error of the input block and
    /// removes correctable physical errors; errors in the Bell pair that
    /// act trivially on it change nothing.
    #[test]
    fn teleport_preserves_logical_class(
        lx in 0u64..64, lz in 0u64..64,
        log_x in 0u64..64, log_z in 0u64..64,
        stab_x in 0u64..4096, stab_z in 0u64..4096,
        sites in proptest::collection::vec((0usize..30, 0usize..3), 0..3),
        a_pick in (0u64..4096, 0u64..64), b_pick in (0u64..4096, 0u64..64),
    ) {
        let c = code();
        let (sx, sz, lxm, lzm) = (masks_of(c.sx()), masks_of(c.sz()), masks_of(c.lx()), masks_of(c.lz()));
        // Physical error: logical part, stabilizer part and up to two single-qubit errors.
        let mut x = combo(&lxm, log_x) ^ combo(&sx, stab_x);
        let mut z = combo(&lzm, log_z) ^ combo(&sz, stab_z);
        for (q, k) in &sites {
            if *k != 2 { x ^= 1 << q; }
            if *k != 0 { z ^= 1 << q; }
        }
        let d = BlockFrame { x, z, lx, lz };
        let g = gadget();
        let before = g.logical_error(&d);
        prop_assert_eq!(before, (lx ^ log_x, lz ^ log_z));
        // |+>_L is fixed by X stabilizers and X logicals, |0>_L by Z ones.
        let a = (combo(&sx, a_pick.0) ^ combo(&lxm, a_pick.1), 0);
        let b = (0, combo(&sz, b_pick.0) ^ combo(&lzm, b_pick.1));
        let out = g.teleport(d, a, b, &StepFaults::default());
        prop_assert_eq!(g.logical_error(&out), before);
        prop_assert_eq!(g.teleport(d, (0, 0), (0, 0), &StepFaults::default()).x, 0);
    }
}

#[test]
fn logical_cnot_acts_on_frames() {
    let mut c = BlockFrame {
        lx: 0b11,
        lz: 0b100,
        ..BlockFrame::default()
    };
    let mut t = BlockFrame {
        lx: 0b1000,
        lz: 0b10000,
        ..BlockFrame::default()
    };
    Gadget::transversal_cnot(&mut c, &mut t);
    assert_eq!((c.lx, c.lz, t.lx, t.lz), (0b11, 0b10100, 0b1011, 0b10000));
}

#[test]
fn noiseless_cnot_benchmark_never_fails() {
    let t = runner(1).run("x", 0, 200, |rng| {
        gadget().cnot_shot(0.0, DEFAULT_ROUNDS, rng)
    });
    assert_eq!(t.failures, 0);
    // Two blocks, two preparations per teleportation, one attempt each.
    assert_eq!(
        (t.attempts, t.accepted),
        (200 * 10 * 2 * 2, 200 * 10 * 2 * 2)
    );
    let pt = cnot_point(0.0, 200, t, DEFAULT_ROUNDS);
    assert_eq!((pt.rate, pt.ci_lo), (0.0, 0.0));
}

#[test]
fn every_variant_tolerates_single_faults() {
    for v in EncoderVariant::ALL {
        let g = if v == EncoderVariant::Proposed {
            gadget()
        } else {
            &Gadget::new(
                code(),
                EncoderPair::build(code(), v, &SynthOptions::default()).unwrap(),
            )
            .unwrap()
        };
        let (faults, failures) = g.audit_single_faults();
        assert!(faults > 30 * 15 * 3 + 60, "{v}: {faults}");
        assert_eq!(failures, 0, "{v}");
    }
}

#[test]
fn encoders_are_mostly_accepted_at_low_noise() {
    let t = runner(1).run("x", 0, 2000, |rng| {
        let s = gadget().plus_sampler().sample(1e-3, rng);
        Tally {
            attempts: 1,
            accepted: s.accepted as u64,
            failures: 0,
        }
    });
    let acc = t.accepted as f64 / t.attempts as f64;
    assert!(acc > 0.5 && acc < 1.0, "{acc}");
}

#[test]
fn cnot_failures_grow_with_noise() {
    let s = run_logical_cnot_benchmark(gadget(), &[2e-3, 1e-2], 2000, DEFAULT_ROUNDS, &runner(1));
    assert!(s.points[0].rate < s.points[1].rate);
    for pt in &s.points {
        assert!(pt.ci_lo <= pt.rate && pt.rate <= pt.ci_hi);
        assert!(pt.acceptance() < 1.0);
    }
}

// ---- overhead -------------------------------------------------------------

#[test]
fn overhead_without_noise_is_the_register_size() {
    for (v, qubits) in EncoderVariant::ALL.into_iter().zip([64, 270, 180, 120]) {
        let pair = EncoderPair::build(code(), v, &SynthOptions::default()).unwrap();
        let zero = sdc_core::sim::FaultSampler::new(&pair.zero);
        let pt = estimate_qubit_overhead(v.name(), &zero, 0.0, 100, 0, &runner(1));
        assert_eq!((pt.attempts, pt.accepted), (100, 100));
        assert_eq!(pt.expected_qubits, qubits as f64, "{v}");
    }
}

#[test]
fn overhead_grows_with_noise() {
    let pair =
        EncoderPair::build(code(), EncoderVariant::Proposed, &SynthOptions::default()).unwrap();
    let zero = sdc_core::sim::FaultSampler::new(&pair.zero);
    let pt = estimate_qubit_overhead("proposed", &zero, 3e-3, 2000, 0, &runner(1));
    assert!(pt.expected_qubits > 64.0);
    assert_eq!(
        pt.expected_qubits,
        64.0 * pt.attempts as f64 / pt.accepted as f64
    );
    let csv = overhead_csv(&[pt]);
    assert!(csv.starts_with(OVERHEAD_CSV_HEADER));
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("proposed,0.003,2000,"));
}

#[test]
fn sweep_summary_is_json() {
    let s = run_decoder_benchmark(bench(), &[0.05, 0.1], 5000, &runner(1));
    let json = SweepSummary::new("decoder", 17, 5000, &s).to_json();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["experiment"], "decoder");
    assert_eq!(v["points"].as_array().unwrap().len(), 2);
    assert!(v["fit"]["exponent"].is_f64());
}
