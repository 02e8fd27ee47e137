use serde::{Deserialize, Serialize};

use super::{Circuit, Gate2, Instruction};

/// Resource summary of a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub depth: usize,
    pub cx_count: usize,
    pub qubit_count: usize,
    pub measure_count: usize,
}

impl Metrics {
    pub fn of(c: &Circuit) -> Metrics {
        let mut touched = vec![false; c.num_qubits()];
        for ins in c.instructions() {
            if matches!(ins, Instruction::Barrier { .. }) {
                continue;
            }
            for q in ins.qubits() {
                touched[q] = true;
            }
        }
        Metrics {
            depth: depth(c),
            cx_count: cx_count(c),
            qubit_count: touched.iter().filter(|t| **t).count(),
            measure_count: c
                .instructions()
                .iter()
                .filter(|i| matches!(i, Instruction::Measure { .. }))
                .count(),
        }
    }
}

/// ASAP layer count.
///
/// Every quantum instruction takes one layer on each of its qubits. A conditioned
/// instruction is placed no earlier than the layer after the measurements it
/// reads (feed-forward adds no extra layers). Barriers align their qubits.
pub fn depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.num_qubits()];
    let mut ready = vec![0usize; c.num_cbits()];
    let mut max = 0;
    for ins in c.instructions() {
        if let Instruction::Barrier { qubits } = ins {
            let top = qubits.iter().map(|&q| level[q]).max().unwrap_or(0);
            for &q in qubits {
                level[q] = top;
            }
            continue;
        }
        let qs = ins.qubits();
        let mut start = qs.iter().map(|&q| level[q]).max().unwrap_or(0);
        if let Some(expr) = ins.reads() {
            for &b in expr.bits() {
                start = start.max(ready[b]);
            }
        }
        let layer = start + 1;
        for &q in &qs {
            level[q] = layer;
        }
        if let Instruction::Measure { cbit, .. } = ins {
            ready[*cbit] = layer;
        }
        max = max.max(layer);
    }
    max
}

/// Two-qubit gate count in CX units (CZ counts 1, SWAP counts 3).
pub fn cx_count(c: &Circuit) -> usize {
    c.instructions()
        .iter()
        .map(|i| match i {
            Instruction::Gate2 { kind: Gate2::Swap, .. } => 3,
            Instruction::Gate2 { .. } => 1,
            _ => 0,
        })
        .sum()
}
