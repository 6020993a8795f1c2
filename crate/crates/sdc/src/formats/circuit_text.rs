//! Circuit text format.
//!
//! One directive or gate per line, 1-based qubit indices, `#` comments:
//!
//! ```text
//! QUBITS 64
//! BLOCK block1 1 30        # name, first and last qubit
//! INPUT 13
//! OUTPUT block1
//! PREPZ 1
//! PREPX 13
//! H 3
//! CNOT 13 1                # control, target
//! SWAP 1 16
//! PAULI X3 Z5 Y7
//! MEASZ 31
//! MEASX 32
//! CHECK b1.verify 1 2      # stage, measurement slots in order
//! ```
//!
//! The writer emits directives in the order above (gates before checks),
//! so writing a parsed canonical file reproduces it byte for byte.

use sdc_core::circuit::{Circuit, Gate, Pauli1, PauliString};

use super::{parse_err, FormatError};

pub fn write_circuit(c: &Circuit) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "# {} qubits, {} gates, {} CNOTs\n",
        c.num_qubits(),
        c.gates().len(),
        c.cnot_count()
    ));
    s.push_str(&format!("QUBITS {}\n", c.num_qubits()));
    for b in c.blocks() {
        s.push_str(&format!(
            "BLOCK {} {} {}\n",
            b.name,
            b.range.start + 1,
            b.range.end
        ));
    }
    for q in c.inputs() {
        s.push_str(&format!("INPUT {}\n", q + 1));
    }
    if let Some(out) = c.output_block() {
        s.push_str(&format!("OUTPUT {out}\n"));
    }
    for g in c.gates() {
        let line = match g {
            Gate::PrepZ(q) => format!("PREPZ {}", q + 1),
            Gate::PrepX(q) => format!("PREPX {}", q + 1),
            Gate::H(q) => format!("H {}", q + 1),
            Gate::Cnot { control, target } => format!("CNOT {} {}", control + 1, target + 1),
            Gate::Swap(a, b) => format!("SWAP {} {}", a + 1, b + 1),
            Gate::MeasZ(q) => format!("MEASZ {}", q + 1),
            Gate::MeasX(q) => format!("MEASX {}", q + 1),
            Gate::Pauli(p) => {
                let mut l = String::from("PAULI");
                for q in 0..p.num_qubits() {
                    let sym = p.get(q);
                    if sym != Pauli1::I {
                        l.push_str(&format!(" {}{}", sym.symbol(), q + 1));
                    }
                }
                l
            }
        };
        s.push_str(&line);
        s.push('\n');
    }
    for ch in c.checks() {
        s.push_str(&format!("CHECK {}", ch.stage));
        for slot in &ch.slots {
            s.push_str(&format!(" {}", slot + 1));
        }
        s.push('\n');
    }
    s
}

pub fn parse_circuit(text: &str) -> Result<Circuit, FormatError> {
    let mut circuit: Option<Circuit> = None;
    let mut output: Option<(usize, String)> = None;
    let mut checks: Vec<(usize, String, Vec<usize>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut words = line.split_whitespace();
        let kind = words.next().expect("non-empty line").to_ascii_uppercase();
        let args: Vec<&str> = words.collect();
        let err = |m: String| parse_err(line_no, m);
        if kind == "QUBITS" {
            if circuit.is_some() {
                return Err(err("duplicate QUBITS directive".into()));
            }
            let [n] = args[..] else {
                return Err(err("QUBITS takes one count".into()));
            };
            circuit = Some(Circuit::new(parse_count(n).map_err(err)?));
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err(format!("{kind} before QUBITS")))?;
        let n = c.num_qubits();
        let qubit = |s: &str| parse_qubit(s, n).map_err(|m| parse_err(line_no, m));
        let one = |args: &[&str]| match args {
            [q] => qubit(q),
            _ => Err(parse_err(line_no, format!("{kind} takes one qubit"))),
        };
        let two = |args: &[&str]| match args {
            [a, b] => Ok((qubit(a)?, qubit(b)?)),
            _ => Err(parse_err(line_no, format!("{kind} takes two qubits"))),
        };
        let gate = match kind.as_str() {
            "BLOCK" => {
                let [name, first, last] = args[..] else {
                    return Err(err("BLOCK takes a name, first and last qubit".into()));
                };
                let (first, last) = (qubit(first)?, qubit(last)?);
                if last < first {
                    return Err(err("BLOCK range is empty".into()));
                }
                c.add_block(name, first..last + 1)
                    .map_err(|e| err(e.to_string()))?;
                continue;
            }
            "INPUT" => {
                let q = one(&args)?;
                c.add_input(q).map_err(|e| err(e.to_string()))?;
                continue;
            }
            "OUTPUT" => {
                let [name] = args[..] else {
                    return Err(err("OUTPUT takes a block name".into()));
                };
                output = Some((line_no, name.to_string()));
                continue;
            }
            "CHECK" => {
                let Some((stage, slots)) = args.split_first() else {
                    return Err(err("CHECK takes a stage name and slots".into()));
                };
                let slots = slots
                    .iter()
                    .map(|s| {
                        parse_count(s).and_then(|v| {
                            v.checked_sub(1).ok_or_else(|| "slots are 1-based".into())
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(err)?;
                checks.push((line_no, stage.to_string(), slots));
                continue;
            }
            "PREPZ" => Gate::PrepZ(one(&args)?),
            "PREPX" => Gate::PrepX(one(&args)?),
            "H" => Gate::H(one(&args)?),
            "MEASZ" => Gate::MeasZ(one(&args)?),
            "MEASX" => Gate::MeasX(one(&args)?),
            "CNOT" => {
                let (control, target) = two(&args)?;
                Gate::Cnot { control, target }
            }
            "SWAP" => {
                let (a, b) = two(&args)?;
                Gate::Swap(a, b)
            }
            "PAULI" => {
                let mut p = PauliString::identity(n);
                for a in &args {
                    let mut chars = a.chars();
                    let sym = match chars.next().map(|ch| ch.to_ascii_uppercase()) {
                        Some('X') => Pauli1::X,
                        Some('Y') => Pauli1::Y,
                        Some('Z') => Pauli1::Z,
                        _ => return Err(err(format!("bad Pauli factor {a:?}"))),
                    };
                    let q = qubit(chars.as_str())?;
                    if p.get(q) != Pauli1::I {
                        return Err(err(format!("qubit {} appears twice", q + 1)));
                    }
                    p.set(q, sym);
                }
                Gate::Pauli(p)
            }
            other => return Err(err(format!("unknown gate {other:?}"))),
        };
        c.push(gate).map_err(|e| err(e.to_string()))?;
    }
    let mut c = circuit.ok_or_else(|| parse_err(1, "missing QUBITS directive"))?;
    for (line, stage, slots) in checks {
        c.add_check(&stage, slots)
            .map_err(|e| parse_err(line, e.to_string()))?;
    }
    if let Some((line, name)) = output {
        c.set_output(&name)
            .map_err(|e| parse_err(line, e.to_string()))?;
    }
    Ok(c)
}

fn parse_count(s: &str) -> Result<usize, String> {
    s.parse()
        .map_err(|_| format!("expected a non-negative integer, found {s:?}"))
}

fn parse_qubit(s: &str, n: usize) -> Result<usize, String> {
    let q = parse_count(s)?;
    if q == 0 || q > n {
        return Err(format!("qubit {q} outside 1..={n}"));
    }
    Ok(q - 1)
}
