//! Exhaustive single-fault audits.
//!
//! Every fault of the noise model is propagated to the end of the circuit
//! (see [`crate::sim::frame`]). A run is kept only if all checks pass; the
//! residual Pauli on the output block is then split into its X and Z parts,
//! and each part is reduced modulo the matching part of the target state's
//! stabilizer group. For the logical plus state that group is
//! `<sx, lx>` on the X side and `<sz>` on the Z side; for the zero state it
//! is `<sx>` and `<sz, lz>`. A part whose minimum-weight representative has
//! weight at least 2 is harmful: together with one more fault it can exceed
//! what the distance-5 decoder corrects.

use alloc::vec::Vec;

use crate::circuit::{Circuit, FaultLocation, PauliString};
use crate::code::StabilizerCode;
use crate::decoder::LookupTable;
use crate::gf2::{BitMatrix, BitVec, COSET_RANK_LIMIT};
use crate::sim::frame::compile_fault_effects;
use crate::sim::StabilizerGroup;
use crate::{Basis, Result};

/// Logical product state prepared by an encoder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TargetState {
    /// `|+>_L` on every logical qubit.
    Plus,
    /// `|0>_L` on every logical qubit.
    Zero,
}

impl TargetState {
    /// X-type and Z-type parts of the state's stabilizer group.
    pub fn groups(self, code: &StabilizerCode) -> Result<(BitMatrix, BitMatrix)> {
        Ok(match self {
            TargetState::Plus => (code.sx().vstack(code.lx())?, code.sz().clone()),
            TargetState::Zero => (code.sx().clone(), code.sz().vstack(code.lz())?),
        })
    }

    /// Full stabilizer group (all signs `+`).
    pub fn stabilizer_group(self, code: &StabilizerCode) -> Result<StabilizerGroup> {
        let (x, z) = self.groups(code)?;
        StabilizerGroup::css(x.rows(), z.rows(), code.n())
    }
}

enum Reduction {
    Exhaustive(BitMatrix),
    Table(LookupTable),
}

/// Reduces one type of residual modulo one part of a state's group.
struct PartReducer {
    checks: BitMatrix,
    checks_columns: Vec<BitVec>,
    reduction: Reduction,
}

impl PartReducer {
    fn new(group: &BitMatrix) -> Result<Self> {
        let checks = group.kernel();
        let checks_columns = (0..checks.num_cols()).map(|j| checks.column(j)).collect();
        let reduction = if group.rank() <= COSET_RANK_LIMIT {
            Reduction::Exhaustive(group.row_basis())
        } else {
            Reduction::Table(LookupTable::build(&checks, Basis::X, checks.num_cols())?)
        };
        Ok(PartReducer {
            checks,
            checks_columns,
            reduction,
        })
    }

    /// Whether `e` is equivalent to an operator of weight at most 1.
    fn at_most_one(&self, e: &BitVec) -> bool {
        let s = self.checks.mul_vec(e);
        s.is_zero() || self.checks_columns.contains(&s)
    }

    fn reduce(&self, e: &BitVec) -> Result<BitVec> {
        match &self.reduction {
            Reduction::Exhaustive(g) => g.reduce_mod_rowspace(e),
            Reduction::Table(t) => {
                let s = t.syndrome_of_bits(e);
                Ok(BitVec::from_u64(e.len(), t.decode(s)))
            }
        }
    }
}

/// Classifies residual errors on an output block.
pub struct ResidualClassifier {
    x: PartReducer,
    z: PartReducer,
}

impl ResidualClassifier {
    pub fn new(code: &StabilizerCode, state: TargetState) -> Result<Self> {
        let (gx, gz) = state.groups(code)?;
        Ok(ResidualClassifier {
            x: PartReducer::new(&gx)?,
            z: PartReducer::new(&gz)?,
        })
    }

    /// Minimum-weight representative of one part of a residual.
    pub fn reduce(&self, basis: Basis, e: &BitVec) -> Result<BitVec> {
        match basis {
            Basis::X => self.x.reduce(e),
            Basis::Z => self.z.reduce(e),
        }
    }

    pub fn is_harmless(&self, basis: Basis, e: &BitVec) -> bool {
        match basis {
            Basis::X => self.x.at_most_one(e),
            Basis::Z => self.z.at_most_one(e),
        }
    }

    /// Both parts reduce to weight at most 1.
    pub fn is_clean(&self, p: &PauliString) -> bool {
        self.x.at_most_one(&p.x) && self.z.at_most_one(&p.z)
    }
}

/// One fault whose accepted residual is harmful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmfulFault {
    pub location: FaultLocation,
    /// Residual of the audited type on the output block.
    pub residual: BitVec,
    /// Minimum-weight equivalent of `residual`.
    pub reduced: BitVec,
}

impl HarmfulFault {
    pub fn weight(&self) -> usize {
        self.reduced.weight()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaultAuditReport {
    pub basis: Basis,
    pub state: TargetState,
    pub total_locations: usize,
    /// Locations whose fault trips a check.
    pub rejected: usize,
    pub harmful: Vec<HarmfulFault>,
}

impl FaultAuditReport {
    /// Distinct harmful residuals in first-seen order.
    pub fn distinct_residuals(&self) -> Vec<BitVec> {
        let mut out: Vec<BitVec> = Vec::new();
        for h in &self.harmful {
            if !out.contains(&h.residual) {
                out.push(h.residual.clone());
            }
        }
        out
    }
}

/// Single-fault audit of one error type (`basis = Z` audits Z errors).
pub fn audit_single_faults(
    c: &Circuit,
    code: &StabilizerCode,
    state: TargetState,
    basis: Basis,
) -> Result<FaultAuditReport> {
    let classifier = ResidualClassifier::new(code, state)?;
    let effects = compile_fault_effects(c);
    let mut harmful = Vec::new();
    let mut rejected = 0;
    for e in &effects {
        if !e.accepted() {
            rejected += 1;
            continue;
        }
        let part = match basis {
            Basis::X => &e.output.x,
            Basis::Z => &e.output.z,
        };
        if !classifier.is_harmless(basis, part) {
            let reduced = classifier.reduce(basis, part)?;
            harmful.push(HarmfulFault {
                location: e.location,
                residual: part.clone(),
                reduced,
            });
        }
    }
    Ok(FaultAuditReport {
        basis,
        state,
        total_locations: effects.len(),
        rejected,
        harmful,
    })
}

/// An accepted single fault leaving a harmful residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractViolation {
    pub location: FaultLocation,
    pub residual: PauliString,
    pub x_weight: usize,
    pub z_weight: usize,
}

/// Result of checking the single-fault contract: every accepted run's
/// residual reduces to weight at most 1 in each of its X and Z parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractReport {
    pub total_locations: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub violations: Vec<ContractViolation>,
}

impl ContractReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn audit_ft_contract(
    c: &Circuit,
    code: &StabilizerCode,
    state: TargetState,
) -> Result<ContractReport> {
    let classifier = ResidualClassifier::new(code, state)?;
    let effects = compile_fault_effects(c);
    let mut violations = Vec::new();
    let mut accepted = 0;
    for e in &effects {
        if !e.accepted() {
            continue;
        }
        accepted += 1;
        if !classifier.is_clean(&e.output) {
            violations.push(ContractViolation {
                location: e.location,
                residual: e.output.clone(),
                x_weight: classifier.reduce(Basis::X, &e.output.x)?.weight(),
                z_weight: classifier.reduce(Basis::Z, &e.output.z)?.weight(),
            });
        }
    }
    Ok(ContractReport {
        total_locations: effects.len(),
        accepted,
        rejected: effects.len() - accepted,
        violations,
    })
}
