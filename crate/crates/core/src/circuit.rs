//! Gate-level circuit IR shared by encoders, verification and benchmarks.
//!
//! Besides the gate list a circuit carries the classical post-processing it
//! needs: named qubit blocks, open input qubits, parity checks over
//! measurement slots (a shot is accepted iff every check evaluates to zero)
//! and the block holding the output state.

use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use crate::gf2::BitVec;
use crate::{Error, Result};

/// Single-qubit Pauli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    pub const ALL: [Pauli1; 4] = [Pauli1::I, Pauli1::X, Pauli1::Y, Pauli1::Z];

    pub fn has_x(self) -> bool {
        matches!(self, Pauli1::X | Pauli1::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli1::Z | Pauli1::Y)
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli1 {
        match (x, z) {
            (false, false) => Pauli1::I,
            (true, false) => Pauli1::X,
            (true, true) => Pauli1::Y,
            (false, true) => Pauli1::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli1::I => 'I',
            Pauli1::X => 'X',
            Pauli1::Y => 'Y',
            Pauli1::Z => 'Z',
        }
    }
}

/// Pauli operator on a whole register, sign ignored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: BitVec,
    pub z: BitVec,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn get(&self, q: usize) -> Pauli1 {
        Pauli1::from_bits(self.x.get(q), self.z.get(q))
    }

    pub fn set(&mut self, q: usize, p: Pauli1) {
        self.x.set(q, p.has_x());
        self.z.set(q, p.has_z());
    }

    /// Multiplies in `p` on qubit `q` (phase dropped).
    pub fn apply(&mut self, q: usize, p: Pauli1) {
        if p.has_x() {
            self.x.flip(q);
        }
        if p.has_z() {
            self.z.flip(q);
        }
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    pub fn mul_assign(&mut self, other: &PauliString) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    PrepZ(usize),
    PrepX(usize),
    H(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Swap(usize, usize),
    MeasZ(usize),
    MeasX(usize),
    /// Deliberate Pauli applied as part of the circuit.
    Pauli(PauliString),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::PrepZ(q) | Gate::PrepX(q) | Gate::H(q) | Gate::MeasZ(q) | Gate::MeasX(q) => {
                alloc::vec![*q]
            }
            Gate::Cnot { control, target } => alloc::vec![*control, *target],
            Gate::Swap(a, b) => alloc::vec![*a, *b],
            Gate::Pauli(p) => {
                p.x.iter_ones()
                    .chain(p.z.iter_ones().filter(|&q| !p.x.get(q)))
                    .collect()
            }
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Gate::MeasZ(_) | Gate::MeasX(_))
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }
}

/// Named contiguous qubit range.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub name: String,
    pub range: Range<usize>,
}

/// Parity over measurement slots; zero in every noiseless run.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Check {
    pub stage: String,
    pub slots: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    blocks: Vec<Block>,
    inputs: Vec<usize>,
    checks: Vec<Check>,
    output: Option<String>,
    measurements: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            ..Default::default()
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn num_measurements(&self) -> usize {
        self.measurements
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_cnot()).count()
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    /// Qubit range of the output block, or the whole register if unset.
    pub fn output_range(&self) -> Range<usize> {
        self.output
            .as_deref()
            .and_then(|n| self.block(n))
            .map(|b| b.range.clone())
            .unwrap_or(0..self.num_qubits)
    }

    pub fn output_block(&self) -> Option<&str> {
        self.output.as_deref()
    }

    /// Grows the register; existing indices are unchanged.
    pub fn add_qubits(&mut self, extra: usize) -> Range<usize> {
        let start = self.num_qubits;
        self.num_qubits += extra;
        start..self.num_qubits
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Appends a gate after validating its qubit indices. Returns the
    /// measurement slot for measurements.
    pub fn push(&mut self, gate: Gate) -> Result<Option<usize>> {
        match &gate {
            Gate::Cnot { control, target } => {
                self.check_qubit(*control)?;
                self.check_qubit(*target)?;
                if control == target {
                    return Err(Error::RepeatedQubit { qubit: *control });
                }
            }
            Gate::Swap(a, b) => {
                self.check_qubit(*a)?;
                self.check_qubit(*b)?;
                if a == b {
                    return Err(Error::RepeatedQubit { qubit: *a });
                }
            }
            Gate::Pauli(p) => {
                if p.num_qubits() != self.num_qubits {
                    return Err(Error::DimensionMismatch {
                        op: "pauli gate",
                        left: (1, p.num_qubits()),
                        right: (1, self.num_qubits),
                    });
                }
            }
            other => self.check_qubit(other.qubits()[0])?,
        }
        let slot = gate.is_measurement().then(|| {
            self.measurements += 1;
            self.measurements - 1
        });
        self.gates.push(gate);
        Ok(slot)
    }

    pub fn prep_z(&mut self, q: usize) -> Result<()> {
        self.push(Gate::PrepZ(q)).map(drop)
    }

    pub fn prep_x(&mut self, q: usize) -> Result<()> {
        self.push(Gate::PrepX(q)).map(drop)
    }

    pub fn h(&mut self, q: usize) -> Result<()> {
        self.push(Gate::H(q)).map(drop)
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.push(Gate::Cnot { control, target }).map(drop)
    }

    pub fn swap(&mut self, a: usize, b: usize) -> Result<()> {
        self.push(Gate::Swap(a, b)).map(drop)
    }

    pub fn meas_z(&mut self, q: usize) -> Result<usize> {
        self.push(Gate::MeasZ(q))
            .map(|s| s.expect("measurement slot"))
    }

    pub fn meas_x(&mut self, q: usize) -> Result<usize> {
        self.push(Gate::MeasX(q))
            .map(|s| s.expect("measurement slot"))
    }

    pub fn add_block(&mut self, name: &str, range: Range<usize>) -> Result<()> {
        if range.end > self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: range.end - 1,
                num_qubits: self.num_qubits,
            });
        }
        self.blocks.push(Block {
            name: name.into(),
            range,
        });
        Ok(())
    }

    pub fn set_output(&mut self, block: &str) -> Result<()> {
        if self.block(block).is_none() {
            return Err(Error::Synthesis(alloc::format!("unknown block {block:?}")));
        }
        self.output = Some(block.into());
        Ok(())
    }

    pub fn add_input(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        self.inputs.push(q);
        Ok(())
    }

    pub fn add_check(&mut self, stage: &str, slots: Vec<usize>) -> Result<()> {
        if let Some(&bad) = slots.iter().find(|&&s| s >= self.measurements) {
            return Err(Error::Synthesis(alloc::format!(
                "check refers to unknown measurement slot {bad}"
            )));
        }
        self.checks.push(Check {
            stage: stage.into(),
            slots,
        });
        Ok(())
    }

    /// Appends `CNOT(a_i, b_i)` for each position `i` of two equal blocks.
    pub fn transversal_cnot(&mut self, block_a: Range<usize>, block_b: Range<usize>) -> Result<()> {
        if block_a.len() != block_b.len() {
            return Err(Error::DimensionMismatch {
                op: "transversal_cnot",
                left: (1, block_a.len()),
                right: (1, block_b.len()),
            });
        }
        if block_a.start < block_b.end && block_b.start < block_a.end {
            return Err(Error::Synthesis("transversal CNOT blocks overlap".into()));
        }
        for (a, b) in block_a.zip(block_b) {
            self.cnot(a, b)?;
        }
        Ok(())
    }

    /// Transversal Hadamards followed by `SWAP(q, q + n/2)` on a block of a
    /// symplectic double code. On the code space this is the logical
    /// transversal Hadamard followed by logical SWAPs between the halves.
    pub fn logical_hadamard_layer(&mut self, block: Range<usize>) -> Result<()> {
        if block.is_empty() || !block.len().is_multiple_of(2) {
            return Err(Error::Synthesis(alloc::format!(
                "logical Hadamard layer needs an even-size block, got {}",
                block.len()
            )));
        }
        for q in block.clone() {
            self.h(q)?;
        }
        let half = block.len() / 2;
        for q in block.start..block.start + half {
            self.swap(q, q + half)?;
        }
        Ok(())
    }

    /// Appends every gate, block, input and check of `other` with qubits
    /// shifted by `offset`; `other`'s measurement slots are renumbered after
    /// this circuit's. Returns the slot offset.
    pub fn append_shifted(
        &mut self,
        other: &Circuit,
        offset: usize,
        prefix: &str,
    ) -> Result<usize> {
        if offset + other.num_qubits > self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: offset + other.num_qubits - 1,
                num_qubits: self.num_qubits,
            });
        }
        let slot_offset = self.measurements;
        for g in &other.gates {
            let shifted = match g {
                Gate::PrepZ(q) => Gate::PrepZ(q + offset),
                Gate::PrepX(q) => Gate::PrepX(q + offset),
                Gate::H(q) => Gate::H(q + offset),
                Gate::Cnot { control, target } => Gate::Cnot {
                    control: control + offset,
                    target: target + offset,
                },
                Gate::Swap(a, b) => Gate::Swap(a + offset, b + offset),
                Gate::MeasZ(q) => Gate::MeasZ(q + offset),
                Gate::MeasX(q) => Gate::MeasX(q + offset),
                Gate::Pauli(p) => {
                    let mut big = PauliString::identity(self.num_qubits);
                    for q in 0..p.num_qubits() {
                        big.set(q + offset, p.get(q));
                    }
                    Gate::Pauli(big)
                }
            };
            self.push(shifted)?;
        }
        for b in &other.blocks {
            let name = alloc::format!("{prefix}{}", b.name);
            self.add_block(&name, b.range.start + offset..b.range.end + offset)?;
        }
        for &q in &other.inputs {
            self.add_input(q + offset)?;
        }
        for c in &other.checks {
            let stage = alloc::format!("{prefix}{}", c.stage);
            self.add_check(&stage, c.slots.iter().map(|s| s + slot_offset).collect())?;
        }
        Ok(slot_offset)
    }

    /// Replaces the gate list, keeping metadata. Used by reordering passes.
    pub fn with_gates(&self, gates: Vec<Gate>) -> Result<Circuit> {
        let mut c = Circuit {
            num_qubits: self.num_qubits,
            ..Default::default()
        };
        for g in gates {
            c.push(g)?;
        }
        c.blocks = self.blocks.clone();
        c.inputs = self.inputs.clone();
        c.output = self.output.clone();
        for ch in &self.checks {
            c.add_check(&ch.stage, ch.slots.clone())?;
        }
        Ok(c)
    }
}

/// Whether a location's fault acts before or after its gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Timing {
    Before,
    After,
}

/// A Pauli on at most two qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalPauli {
    pub qubits: [usize; 2],
    pub paulis: [Pauli1; 2],
}

impl LocalPauli {
    pub fn single(q: usize, p: Pauli1) -> Self {
        LocalPauli {
            qubits: [q, q],
            paulis: [p, Pauli1::I],
        }
    }

    pub fn pair(a: usize, pa: Pauli1, b: usize, pb: Pauli1) -> Self {
        LocalPauli {
            qubits: [a, b],
            paulis: [pa, pb],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.paulis == [Pauli1::I, Pauli1::I]
    }

    pub fn to_string_on(&self, n: usize) -> PauliString {
        let mut p = PauliString::identity(n);
        p.apply(self.qubits[0], self.paulis[0]);
        p.apply(self.qubits[1], self.paulis[1]);
        p
    }
}

/// One elementary fault of the circuit-level noise model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaultLocation {
    pub gate_index: usize,
    pub timing: Timing,
    pub fault: LocalPauli,
}

/// The 15 non-identity two-qubit Paulis in `(first, second)` order
/// `IX, IY, IZ, XI, XX, ..., ZZ`.
pub fn two_qubit_paulis() -> impl Iterator<Item = (Pauli1, Pauli1)> {
    Pauli1::ALL
        .into_iter()
        .flat_map(|a| Pauli1::ALL.into_iter().map(move |b| (a, b)))
        .filter(|&(a, b)| (a, b) != (Pauli1::I, Pauli1::I))
}

/// Faults allowed after (or before) one gate.
pub fn faults_at(gate_index: usize, gate: &Gate) -> Vec<FaultLocation> {
    let after = |fault| FaultLocation {
        gate_index,
        timing: Timing::After,
        fault,
    };
    let before = |fault| FaultLocation {
        gate_index,
        timing: Timing::Before,
        fault,
    };
    match *gate {
        Gate::Cnot { control, target } => two_qubit_paulis()
            .map(|(a, b)| after(LocalPauli::pair(control, a, target, b)))
            .collect(),
        Gate::PrepZ(q) => alloc::vec![after(LocalPauli::single(q, Pauli1::X))],
        Gate::PrepX(q) => alloc::vec![after(LocalPauli::single(q, Pauli1::Z))],
        Gate::MeasZ(q) => alloc::vec![before(LocalPauli::single(q, Pauli1::X))],
        Gate::MeasX(q) => alloc::vec![before(LocalPauli::single(q, Pauli1::Z))],
        Gate::H(_) | Gate::Swap(..) | Gate::Pauli(_) => Vec::new(),
    }
}

/// Every single fault of the noise model, in gate order. CNOTs contribute
/// 15 entries; preparations and measurements one each; Hadamard, SWAP and
/// explicit Pauli gates are noiseless.
pub fn enumerate_fault_locations(c: &Circuit) -> Vec<FaultLocation> {
    c.gates()
        .iter()
        .enumerate()
        .flat_map(|(i, g)| faults_at(i, g))
        .collect()
}
