//! Verification measurements that catch harmful Z errors of a plus encoder.
//!
//! Each measured operator is an X-type element of `<sx, lx>` with a
//! nontrivial logical part, so it is +1 on the ideal state. A Z residual is
//! caught by an operator iff they overlap on an odd number of qubits. The
//! operator set is a minimum set cover of the audit's harmful residuals:
//! exact for covers of up to three operators, greedy beyond. Among covers of
//! the same size the smallest total weight wins, then the lexicographically
//! first list of operators in (weight, support order).
//!
//! Each operator is measured with one ancilla: `PrepX(a)`, `CNOT(a -> q)`
//! for every support qubit `q` in ascending order, `MeasX(a)`. A Z error on
//! a data qubit propagates to the control and flips the outcome, while an X
//! fault on the ancilla can spread X errors onto the data; those are left to
//! the X check of the two-block protocol.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::audit::{FaultAuditReport, TargetState};
use crate::circuit::Circuit;
use crate::code::StabilizerCode;
use crate::gf2::{support_order, BitVec};
use crate::{Basis, Error, Result};

/// Default weight cap of measured operators.
pub const DEFAULT_WEIGHT_CAP: usize = 11;

/// Largest number of distinct residuals for the exact cover search.
const EXACT_COVER_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationPlan {
    /// Supports of the measured X-type operators, in measurement order.
    pub operators: Vec<BitVec>,
    /// Distinct harmful residuals the plan was built for.
    pub residuals: Vec<BitVec>,
}

impl VerificationPlan {
    pub fn ancilla_count(&self) -> usize {
        self.operators.len()
    }

    /// Index of the first operator detecting residual `e`.
    pub fn detected_by(&self, e: &BitVec) -> Option<usize> {
        self.operators.iter().position(|op| op.dot(e))
    }
}

/// X-type operators of `<sx, lx>` with a nontrivial logical part and weight
/// at most `cap`, sorted by weight then support order.
pub fn logical_x_candidates(code: &StabilizerCode, cap: usize) -> Vec<BitVec> {
    let sx_basis = code.sx().row_basis();
    let lx = code.lx();
    let basis: Vec<&BitVec> = sx_basis.rows().iter().chain(lx.rows()).collect();
    let split = sx_basis.num_rows();
    let dims = basis.len();
    let mut out = Vec::new();
    let mut v = BitVec::zeros(code.n());
    let mut coeff = 0u64;
    let logical_mask = ((1u64 << lx.num_rows()) - 1) << split;
    for step in 1u64..(1u64 << dims) {
        let bit = step.trailing_zeros() as usize;
        v.xor_assign(basis[bit]);
        coeff ^= 1 << bit;
        if coeff & logical_mask != 0 && v.weight() <= cap {
            out.push(v.clone());
        }
    }
    out.sort_by(|a, b| a.cmp_weight_lex(b));
    out
}

fn cover_mask(op: &BitVec, residuals: &[BitVec]) -> u64 {
    residuals
        .iter()
        .enumerate()
        .fold(0u64, |m, (i, e)| if op.dot(e) { m | (1 << i) } else { m })
}

/// Chooses the operators to measure.
pub fn choose_operators(candidates: &[BitVec], residuals: &[BitVec]) -> Result<Vec<BitVec>> {
    if residuals.is_empty() {
        return Ok(Vec::new());
    }
    if residuals.len() > 64 {
        return greedy_cover(candidates, residuals);
    }
    let m = residuals.len();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    // Best (earliest in candidate order) operator per coverage mask.
    let mut by_mask: BTreeMap<u64, usize> = BTreeMap::new();
    for (i, op) in candidates.iter().enumerate() {
        let mask = cover_mask(op, residuals);
        if mask != 0 {
            by_mask.entry(mask).or_insert(i);
        }
    }
    let covered = by_mask.keys().fold(0u64, |a, &k| a | k);
    if covered != full {
        return Err(Error::Synthesis(alloc::format!(
            "no candidate operator detects {} of the {} harmful residuals",
            (full & !covered).count_ones(),
            m
        )));
    }
    if m > EXACT_COVER_LIMIT {
        return greedy_cover(candidates, residuals);
    }
    // best[s]: earliest candidate whose mask contains s.
    let size = 1usize << m;
    let mut best = alloc::vec![usize::MAX; size];
    for (&mask, &i) in &by_mask {
        best[mask as usize] = best[mask as usize].min(i);
    }
    for bit in 0..m {
        for s in (0..size).rev() {
            if s >> bit & 1 == 0 {
                best[s] = best[s].min(best[s | 1 << bit]);
            }
        }
    }
    let weight = |i: usize| candidates[i].weight();
    let distinct: Vec<(u64, usize)> = by_mask.iter().map(|(&k, &i)| (k, i)).collect();
    let full_us = full as usize;
    if best[full_us] != usize::MAX {
        return Ok(alloc::vec![candidates[best[full_us]].clone()]);
    }
    let pick = |sets: Vec<Vec<usize>>| -> Option<Vec<BitVec>> {
        sets.into_iter()
            .map(|mut s| {
                s.sort();
                s.dedup();
                s
            })
            .min_by(|a, b| {
                let wa: usize = a.iter().map(|&i| weight(i)).sum();
                let wb: usize = b.iter().map(|&i| weight(i)).sum();
                wa.cmp(&wb).then_with(|| a.cmp(b))
            })
            .map(|s| s.iter().map(|&i| candidates[i].clone()).collect())
    };
    let pairs: Vec<Vec<usize>> = distinct
        .iter()
        .filter_map(|&(mask, i)| {
            let rest = best[full_us & !(mask as usize)];
            (rest != usize::MAX).then(|| alloc::vec![i, rest])
        })
        .collect();
    if let Some(ops) = pick(pairs) {
        return Ok(ops);
    }
    let mut triples: Vec<Vec<usize>> = Vec::new();
    for (a, &(ma, ia)) in distinct.iter().enumerate() {
        for &(mb, ib) in &distinct[a + 1..] {
            let rest = best[full_us & !((ma | mb) as usize)];
            if rest != usize::MAX {
                triples.push(alloc::vec![ia, ib, rest]);
            }
        }
    }
    if let Some(ops) = pick(triples) {
        return Ok(ops);
    }
    greedy_cover(candidates, residuals)
}

fn greedy_cover(candidates: &[BitVec], residuals: &[BitVec]) -> Result<Vec<BitVec>> {
    let mut uncovered: Vec<bool> = alloc::vec![true; residuals.len()];
    let mut chosen = Vec::new();
    while uncovered.iter().any(|&u| u) {
        let gain = |op: &BitVec| {
            residuals
                .iter()
                .zip(&uncovered)
                .filter(|(e, &u)| u && op.dot(e))
                .count()
        };
        let Some(best) = candidates.iter().filter(|op| gain(op) > 0).max_by(|a, b| {
            gain(a)
                .cmp(&gain(b))
                .then_with(|| b.weight().cmp(&a.weight()))
                .then_with(|| support_order(b, a))
        }) else {
            return Err(Error::Synthesis(
                "harmful residuals cannot be covered by candidate operators".into(),
            ));
        };
        for (e, u) in residuals.iter().zip(uncovered.iter_mut()) {
            if best.dot(e) {
                *u = false;
            }
        }
        chosen.push(best.clone());
    }
    Ok(chosen)
}

/// Appends one ancilla per operator to `c` and returns the verified
/// circuit. Checks are labelled `verify`.
pub fn append_verification(c: &Circuit, operators: &[BitVec]) -> Result<Circuit> {
    let data = c.output_range();
    let mut out = Circuit::new(c.num_qubits() + operators.len());
    out.append_shifted(c, 0, "")?;
    let first = c.num_qubits();
    if !operators.is_empty() {
        out.add_block("verify", first..first + operators.len())?;
    }
    for (k, op) in operators.iter().enumerate() {
        let a = first + k;
        out.prep_x(a)?;
        for q in op.iter_ones() {
            out.cnot(a, data.start + q)?;
        }
        let m = out.meas_x(a)?;
        out.add_check("verify", alloc::vec![m])?;
    }
    if let Some(name) = c.output_block() {
        out.set_output(name)?;
    }
    Ok(out)
}

/// Verification for a plus encoder from its Z-error audit.
pub fn synth_verification(
    c: &Circuit,
    code: &StabilizerCode,
    report: &FaultAuditReport,
    weight_cap: usize,
) -> Result<(Circuit, VerificationPlan)> {
    if report.basis != Basis::Z || report.state != TargetState::Plus {
        return Err(Error::Synthesis(
            "verification needs a Z-error audit of a plus encoder".into(),
        ));
    }
    let residuals = report.distinct_residuals();
    let operators = if residuals.is_empty() {
        Vec::new()
    } else {
        choose_operators(&logical_x_candidates(code, weight_cap), &residuals)?
    };
    let circuit = append_verification(c, &operators)?;
    Ok((
        circuit,
        VerificationPlan {
            operators,
            residuals,
        },
    ))
}
