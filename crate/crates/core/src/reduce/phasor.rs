//! Star-free phasor reduction: parity is collected into a snaking ancilla wire.
//!
//! The wire starts on the ancilla of row `lo` and ends on the ancilla of row
//! `hi`. Ancillas at even offsets run forward in time, those at odd offsets
//! backward (they are halves of cup pairs). A Pauli error left at a bend by a
//! cap, zag or reused ancilla either flips the rotation sign (X type) or
//! propagates to every data qubit coupled to the wire before that bend (Z type).

use crate::circuit::{Axis, Instruction};
use crate::error::{QdcError, Result};
use crate::frame::ParityExpr;
use crate::pauli::{Pauli, PauliRotation, PauliString};

use super::gadgets::{emit_cap, emit_cup, zag_finish, zag_prepare};
use super::{DynamicBuilder, Link, SnakePlan};

/// Classical bookkeeping of one reduced phasor.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasorRecord {
    pub rotation: PauliRotation,
    pub plan: SnakePlan,
    /// `(z, x)` cbits of each cap, top to bottom.
    pub caps: Vec<(usize, usize)>,
    pub zag: Option<usize>,
    /// Final X-basis readout of the wire.
    pub readout: usize,
    /// Sign of the conditional rotation.
    pub sign: ParityExpr,
    /// `(row, s)`: the data qubit in `row` needs `P_row^s`.
    pub corrections: Vec<(usize, ParityExpr)>,
}

/// Gates rotating `p` onto Z, in time order.
fn to_z(p: Pauli, q: usize) -> Vec<Instruction> {
    match p {
        Pauli::X => vec![Instruction::h(q)],
        Pauli::Y => vec![Instruction::sdg(q), Instruction::h(q)],
        _ => Vec::new(),
    }
}

fn from_z(p: Pauli, q: usize) -> Vec<Instruction> {
    match p {
        Pauli::X => vec![Instruction::h(q)],
        Pauli::Y => vec![Instruction::h(q), Instruction::s(q)],
        _ => Vec::new(),
    }
}

impl DynamicBuilder {
    /// Reduces `r` with the snake over its support range.
    pub fn phasor(&mut self, r: &PauliRotation) -> Result<&PhasorRecord> {
        let plan = SnakePlan::for_rotation(r)?;
        self.phasor_with_plan(r, &plan)
    }

    pub fn phasor_with_plan(&mut self, r: &PauliRotation, plan: &SnakePlan) -> Result<&PhasorRecord> {
        let n = self.rows;
        if r.num_qubits() != n {
            return Err(QdcError::LengthMismatch(r.num_qubits(), n));
        }
        if r.is_clifford() {
            return Err(QdcError::Plan(format!("rotation on {} is Clifford", r.pauli())));
        }
        if SnakePlan::for_rotation(r)? != *plan {
            return Err(QdcError::Plan(format!(
                "plan over rows {}..={} does not match the support of {}",
                plan.lo,
                plan.hi,
                r.pauli()
            )));
        }
        if self.layout.cols() < 2 || self.data.iter().enumerate().any(|(row, &q)| q != row) {
            return Err(QdcError::Plan("phasors need data in column 0 and a free column 1".into()));
        }

        let p = r.pauli();
        let (lo, hi) = (plan.lo, plan.hi);
        let len = plan.len();
        let data = |row: usize| row;
        let anc = |row: usize| n + row;
        let support: Vec<usize> = (lo..=hi).filter(|&row| p.get(row) != Pauli::I).collect();
        let released = |b: &Self, row: usize| b.known[anc(row)].clone();
        let zag_rows = plan.zag();

        // Basis change and resource states.
        for &row in &support {
            self.circuit.extend(to_z(p.get(row), data(row)))?;
        }
        for (a, b) in plan.cups() {
            emit_cup(&mut self.circuit, anc(a), anc(b))?;
        }
        if let Some((_, b)) = zag_rows {
            zag_prepare(&mut self.circuit, anc(b))?;
        }

        // Parity onto the wire, except the row beyond the zag.
        let late = zag_rows.map(|(_, b)| b);
        for &row in &support {
            if Some(row) != late {
                self.circuit.push(Instruction::cx(data(row), anc(row)))?;
            }
        }

        // Errors at each bend, indexed by connection offset.
        let mut sign = ParityExpr::zero();
        let mut bend_z = vec![ParityExpr::zero(); len.saturating_sub(1)];

        // The wire starts in the released state of its first ancilla.
        sign.xor_assign(&released(self, lo));
        for (k, link) in plan.links.iter().enumerate() {
            let (a, b) = (lo + k, lo + k + 1);
            match link {
                Link::Cup => {
                    // H turns a stale X on the upper half into Z.
                    bend_z[k].xor_assign(&released(self, a));
                    sign.xor_assign(&released(self, b));
                }
                Link::Zag => bend_z[k].xor_assign(&released(self, b)),
                Link::Cap => {}
            }
        }

        let mut caps = Vec::new();
        for (k, link) in plan.links.iter().enumerate() {
            if *link != Link::Cap {
                continue;
            }
            let (a, b) = (lo + k, lo + k + 1);
            let bits = (self.alloc(), self.alloc());
            emit_cap(&mut self.circuit, anc(a), anc(b), bits)?;
            self.mark_measured(anc(a), bits.0);
            self.mark_measured(anc(b), bits.1);
            bend_z[k].toggle_bit(bits.0);
            sign.toggle_bit(bits.1);
            caps.push(bits);
        }
        let mut zag = None;
        if let Some((a, b)) = zag_rows {
            let bit = self.alloc();
            zag_finish(&mut self.circuit, anc(a), anc(b), bit)?;
            self.mark_measured(anc(a), bit);
            sign.toggle_bit(bit);
            zag = Some(bit);
            if p.get(b) != Pauli::I {
                self.circuit.push(Instruction::cx(data(b), anc(b)))?;
            }
        }

        for &row in &support {
            self.circuit.extend(from_z(p.get(row), data(row)))?;
        }

        // Earlier corrections that anticommute with P flip the rotation.
        for (e, q) in self.frame.terms() {
            if !q.commutes(p)? {
                sign.xor_assign(e);
            }
        }
        let wire = anc(hi);
        self.circuit.push(Instruction::CondSignRot {
            axis: Axis::Z,
            angle: r.angle(),
            sign: sign.clone(),
            qubit: wire,
        })?;
        self.circuit.push(Instruction::h(wire))?;
        let readout = self.alloc();
        self.circuit.push(Instruction::measure(wire, readout))?;
        self.mark_measured(wire, readout);

        // A Z error at bend k reaches the readout and every row coupled before it.
        let mut corrections = Vec::new();
        for &row in &support {
            let mut s = ParityExpr::bit(readout);
            for e in &bend_z[row - lo..] {
                s.xor_assign(e);
            }
            let local = PauliString::single(n, row, p.get(row));
            self.push_frame(s.clone(), local);
            corrections.push((row, s));
        }

        self.phasors.push(PhasorRecord {
            rotation: r.clone(),
            plan: plan.clone(),
            caps,
            zag,
            readout,
            sign,
            corrections,
        });
        Ok(self.phasors.last().expect("just pushed"))
    }
}
