//! CNOT-count reduction for the plus encoder by exploiting column overlaps.
//!
//! Model. Let `w[q]` be the set of target rows whose Z generator currently
//! contains `Z_q`. A CNOT from control `j` to target row `i` toggles `i` in
//! `w[j]`; a CNOT between two controls `j -> l` performs `w[j] ^= w[l]`
//! (a Z on the target picks up a Z on the control). The encoder is correct
//! iff finally `w[j]` equals column `j` of `rref(sz)` for every control, and
//! since the Z group fixes a CSS state with `+` signs, any schedule reaching
//! it prepares exactly the raw encoder's state.
//!
//! A schedule is a sequence of such operations followed by the direct
//! CNOTs still missing; its cost is `len(sequence) + sum_j |cols_j ^ w_j|`.
//! When two controls share `s` targets, one control can fan out to the
//! shared targets and hand them to the other with a single inter-control
//! CNOT, saving `s - 1` gates.
//!
//! Search: a deterministic greedy pass merges the pair with the largest
//! saving (ties: smallest control indices); a seeded simulated-annealing
//! pass then refines the whole sequence until it reaches the target count
//! or exhausts its budget. The result is never worse than the raw encoder.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::plus::{push_preparations, PlusLayout};
use crate::circuit::{Circuit, Gate};
use crate::code::StabilizerCode;
use crate::Result;

/// One step of an overlap schedule (indices into the layout's control list
/// and target rows).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    /// `CNOT(controls[control] -> targets[row])`.
    Fan { control: usize, row: usize },
    /// `CNOT(controls[control] -> controls[target])`.
    Merge { control: usize, target: usize },
}

/// Annealing knobs; the defaults are what the shipped circuits use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnnealOptions {
    pub seed: u64,
    pub restarts: usize,
    pub iterations: usize,
    /// The search stops once a schedule with at most this many CNOTs is
    /// found.
    pub target: usize,
}

impl Default for AnnealOptions {
    fn default() -> Self {
        AnnealOptions {
            seed: 2024,
            restarts: 16,
            iterations: 2_000_000,
            target: 67,
        }
    }
}

/// Columns of the reduced check matrix restricted to target rows, as masks.
pub fn column_masks(layout: &PlusLayout) -> Vec<u64> {
    layout
        .controls
        .iter()
        .map(|&j| layout.column_targets(j).fold(0u64, |m, i| m | (1 << i)))
        .collect()
}

fn apply(step: Step, w: &mut [u64]) {
    match step {
        Step::Fan { control, row } => w[control] ^= 1 << row,
        Step::Merge { control, target } => w[control] ^= w[target],
    }
}

/// Total CNOT count of a schedule.
pub fn schedule_cost(cols: &[u64], steps: &[Step]) -> usize {
    let mut w = alloc::vec![0u64; cols.len()];
    for &s in steps {
        apply(s, &mut w);
    }
    steps.len()
        + cols
            .iter()
            .zip(&w)
            .map(|(c, v)| (c ^ v).count_ones() as usize)
            .sum::<usize>()
}

/// Greedy pair merging.
pub fn greedy_schedule(cols: &[u64]) -> Vec<Step> {
    let m = cols.len();
    let mut v = alloc::vec![0u64; m];
    let mut r = cols.to_vec();
    let mut steps = Vec::new();
    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for j in 0..m {
            for l in 0..m {
                if j == l || v[j] & !r[l] != 0 {
                    continue;
                }
                let shared = r[j] & r[l];
                let gain = shared.count_ones() as i64 + v[j].count_ones() as i64 - 1;
                if gain >= 1 && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, j, l));
                }
            }
        }
        let Some((_, j, l)) = best else { break };
        let shared = r[j] & r[l];
        for row in 0..64 {
            if shared >> row & 1 == 1 {
                steps.push(Step::Fan { control: j, row });
            }
        }
        v[j] |= shared;
        r[j] &= !shared;
        steps.push(Step::Merge {
            control: l,
            target: j,
        });
        r[l] ^= v[j];
        v[l] ^= v[j];
    }
    steps
}

fn random_step<R: Rng>(rng: &mut R, m: usize, rows: usize) -> Step {
    if rng.random_bool(0.5) {
        Step::Fan {
            control: rng.random_range(0..m),
            row: rng.random_range(0..rows),
        }
    } else {
        let control = rng.random_range(0..m);
        let mut target = rng.random_range(0..m - 1);
        if target >= control {
            target += 1;
        }
        Step::Merge { control, target }
    }
}

/// Simulated annealing over schedules, starting from `start`. Returns the
/// best schedule seen (first found among equal costs).
pub fn anneal_schedule(
    cols: &[u64],
    rows: usize,
    start: &[Step],
    opts: &AnnealOptions,
) -> Vec<Step> {
    let m = cols.len();
    let mut best = start.to_vec();
    let mut best_cost = schedule_cost(cols, &best);
    if m < 2 || rows == 0 || best_cost <= opts.target {
        return best;
    }
    for restart in 0..opts.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(restart as u64);
        let mut cur = start.to_vec();
        let mut cur_cost = schedule_cost(cols, &cur);
        for it in 0..opts.iterations {
            let temp = 2.0 * (1.0 - it as f64 / opts.iterations as f64) + 0.05;
            let mut cand = cur.clone();
            let mv: f64 = rng.random();
            if mv < 0.3 || cand.is_empty() {
                let at = rng.random_range(0..=cand.len());
                cand.insert(at, random_step(&mut rng, m, rows));
            } else if mv < 0.5 {
                let at = rng.random_range(0..cand.len());
                cand.remove(at);
            } else if mv < 0.8 && cand.len() > 1 {
                let at = rng.random_range(0..cand.len() - 1);
                cand.swap(at, at + 1);
            } else {
                let at = rng.random_range(0..cand.len());
                cand[at] = random_step(&mut rng, m, rows);
            }
            let cost = schedule_cost(cols, &cand);
            let accept = cost <= cur_cost
                || rng.random::<f64>() < libm::exp((cur_cost as f64 - cost as f64) / temp);
            if accept {
                cur = cand;
                cur_cost = cost;
                if cur_cost < best_cost {
                    best = cur.clone();
                    best_cost = cur_cost;
                    if best_cost <= opts.target {
                        return best;
                    }
                }
            }
        }
    }
    best
}

/// Encoder circuit realizing a schedule: preparations, the schedule, then
/// the remaining direct CNOTs (by control, then row).
pub fn schedule_circuit(
    code: &StabilizerCode,
    layout: &PlusLayout,
    steps: &[Step],
) -> Result<Circuit> {
    let cols = column_masks(layout);
    let mut w = alloc::vec![0u64; cols.len()];
    let mut c = Circuit::new(code.n());
    push_preparations(&mut c, layout, &[])?;
    for &s in steps {
        apply(s, &mut w);
        match s {
            Step::Fan { control, row } => c.cnot(layout.controls[control], layout.targets[row])?,
            Step::Merge { control, target } => {
                c.cnot(layout.controls[control], layout.controls[target])?
            }
        }
    }
    for (j, (&col, &have)) in cols.iter().zip(&w).enumerate() {
        let missing = col ^ have;
        for row in 0..layout.targets.len() {
            if missing >> row & 1 == 1 {
                c.cnot(layout.controls[j], layout.targets[row])?;
            }
        }
    }
    c.add_block("data", 0..code.n())?;
    c.set_output("data")?;
    Ok(c)
}

/// Overlap-optimized plus encoder. `raw` is returned unchanged if no
/// schedule beats its CNOT count.
pub fn overlap_optimize(
    code: &StabilizerCode,
    raw: &Circuit,
    opts: &AnnealOptions,
) -> Result<Circuit> {
    let layout = PlusLayout::new(code);
    let cols = column_masks(&layout);
    let greedy = greedy_schedule(&cols);
    let steps = anneal_schedule(&cols, layout.targets.len(), &greedy, opts);
    let optimized = schedule_circuit(code, &layout, &steps)?;
    if optimized.cnot_count() < raw.cnot_count() {
        Ok(optimized)
    } else {
        Ok(raw.clone())
    }
}

/// Whether every CNOT of `c` commutes with every other (no qubit is used as
/// both a control and a target).
pub fn cnots_commute(c: &Circuit) -> bool {
    let mut controls = Vec::new();
    let mut targets = Vec::new();
    for g in c.gates() {
        if let Gate::Cnot { control, target } = *g {
            controls.push(control);
            targets.push(target);
        }
    }
    controls.iter().all(|q| !targets.contains(q))
}
