//! Clifford snaking: `d` sub-circuits run side by side on `d` columns, joined by
//! row-wise cups and caps. Odd columns run backward in time, so they carry the
//! transpose of their sub-circuit in reverse order.

use crate::circuit::{Circuit, Instruction};
use crate::error::{QdcError, Result};
use crate::frame::ParityExpr;
use crate::pauli::{Pauli, PauliString};
use crate::tableau::{CliffordGate, CliffordTableau};

use super::gadgets::{emit_cap, emit_cup};
use super::DynamicBuilder;

/// Splits `c` by ASAP moment into `d` consecutive chunks of at most `⌈m/d⌉` moments.
pub fn split_by_moment(c: &Circuit, d: usize) -> Vec<Vec<CliffordGate>> {
    let n = c.num_qubits();
    let mut level = vec![0usize; n];
    let mut placed = Vec::new();
    for ins in c.instructions() {
        let qs = ins.qubits();
        let m = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for q in qs {
            level[q] = m;
        }
        placed.push((m, ins));
    }
    let depth = level.iter().copied().max().unwrap_or(0);
    let per = depth.div_ceil(d).max(1);
    let mut chunks = vec![Vec::new(); d];
    for (m, ins) in placed {
        if let Some(g) = ins.as_clifford() {
            chunks[((m - 1) / per).min(d - 1)].push(g);
        }
    }
    chunks
}

/// Transpose of a gate in the computational basis, up to global phase.
fn transpose(g: CliffordGate) -> CliffordGate {
    // H, S, S†, X, Z, CZ, SWAP and CX have real symmetric or permutation-symmetric
    // matrices; Y^T = -Y.
    g
}

impl DynamicBuilder {
    /// Applies the Clifford `suffix` on the data rows, snaked over `d` columns.
    pub fn clifford(&mut self, suffix: &Circuit, d: usize) -> Result<()> {
        let n = self.rows;
        if suffix.num_qubits() != n {
            return Err(QdcError::LengthMismatch(suffix.num_qubits(), n));
        }
        if d == 0 || d % 2 == 0 {
            return Err(QdcError::Plan(format!("snake needs an odd number of columns, got {d}")));
        }
        if d > self.layout.cols() {
            return Err(QdcError::Plan(format!("{d} columns requested on a {}-column grid", self.layout.cols())));
        }
        if self.data.iter().enumerate().any(|(row, &q)| q != row) {
            return Err(QdcError::Plan("Clifford snake needs the data in column 0".into()));
        }
        let gates = suffix.clifford_gates()?;
        let whole = CliffordTableau::from_gates(n, &gates)?;

        if d == 1 {
            for &g in &gates {
                self.circuit.push(Instruction::from_clifford(g))?;
            }
            self.frame = self.frame.conjugate(&whole)?.normalized();
            return Ok(());
        }

        let chunks = split_by_moment(suffix, d);
        let tableaux = chunks
            .iter()
            .map(|ch| CliffordTableau::from_gates(n, ch))
            .collect::<Result<Vec<_>>>()?;
        // after[c]: everything that follows chunk c.
        let mut after = vec![CliffordTableau::identity(n); d];
        for c in (0..d - 1).rev() {
            after[c] = tableaux[c + 1].then(&after[c + 1])?;
        }

        let mut bend_errors: Vec<(usize, ParityExpr, PauliString)> = Vec::new();
        for c in (1..d - 1).step_by(2) {
            for row in 0..n {
                let (qa, qb) = (self.qubit(row, c), self.qubit(row, c + 1));
                bend_errors.push((c, self.known[qa].clone(), PauliString::single(n, row, Pauli::Z)));
                bend_errors.push((c, self.known[qb].clone(), PauliString::single(n, row, Pauli::X)));
                emit_cup(&mut self.circuit, qa, qb)?;
            }
        }
        for (c, chunk) in chunks.iter().enumerate() {
            let map: Vec<usize> = (0..n).map(|row| self.qubit(row, c)).collect();
            if c % 2 == 0 {
                for g in chunk {
                    self.circuit.push(Instruction::from_clifford(g.remap(&map)))?;
                }
            } else {
                for g in chunk.iter().rev() {
                    self.circuit.push(Instruction::from_clifford(transpose(*g).remap(&map)))?;
                }
            }
        }
        for c in (0..d - 1).step_by(2) {
            for row in 0..n {
                let (qa, qb) = (self.qubit(row, c), self.qubit(row, c + 1));
                let bits = (self.alloc(), self.alloc());
                emit_cap(&mut self.circuit, qa, qb, bits)?;
                self.mark_measured(qa, bits.0);
                self.mark_measured(qb, bits.1);
                bend_errors.push((c, ParityExpr::bit(bits.0), PauliString::single(n, row, Pauli::Z)));
                bend_errors.push((c, ParityExpr::bit(bits.1), PauliString::single(n, row, Pauli::X)));
            }
        }

        let mut frame = self.frame.conjugate(&whole)?;
        for (c, e, p) in bend_errors {
            frame.push(e, after[c].conjugate(&p)?.unsigned());
        }
        self.frame = frame.normalized();
        self.data = (0..n).map(|row| self.qubit(row, d - 1)).collect();
        Ok(())
    }
}
