//! Bell-pair gadgets: cup (preparation), cap (measurement) and zag (one-qubit teleport).
//!
//! Corrections are returned as one-qubit frames on the wire that survives the gadget.

use crate::circuit::{Circuit, Instruction};
use crate::error::{QdcError, Result};
use crate::frame::{ParityExpr, PauliFrame};
use crate::pauli::{Pauli, PauliString};

fn fresh(c: &Circuit, cbit: usize) -> Result<()> {
    if cbit >= c.num_cbits() {
        return Err(QdcError::InvalidCircuit(format!("cbit {cbit} not allocated")));
    }
    if c.cbit_written(cbit) {
        return Err(QdcError::InvalidCircuit(format!("cbit c{cbit} reused")));
    }
    Ok(())
}

fn wire(p: Pauli) -> PauliString {
    PauliString::single(1, 0, p)
}

/// `(|00⟩+|11⟩)/√2` on `(qa, qb)` from `|00⟩`.
pub fn emit_cup(c: &mut Circuit, qa: usize, qb: usize) -> Result<()> {
    c.push(Instruction::h(qa))?;
    c.push(Instruction::cx(qa, qb))
}

/// Bell measurement of `(qa, qb)` into `(ca, cb)`. The wire continuing past the
/// bend picks up `Z^{m_a} X^{m_b}`.
pub fn emit_cap(c: &mut Circuit, qa: usize, qb: usize, (ca, cb): (usize, usize)) -> Result<PauliFrame> {
    if ca == cb {
        return Err(QdcError::InvalidCircuit(format!("cbit c{ca} reused")));
    }
    fresh(c, ca)?;
    fresh(c, cb)?;
    c.push(Instruction::cx(qa, qb))?;
    c.push(Instruction::h(qa))?;
    c.push(Instruction::measure(qb, cb))?;
    c.push(Instruction::measure(qa, ca))?;
    Ok(PauliFrame::from_terms(vec![
        (ParityExpr::bit(ca), wire(Pauli::Z)),
        (ParityExpr::bit(cb), wire(Pauli::X)),
    ]))
}

/// First half of a zag: `qb` into `|+⟩`. Can be scheduled early.
pub fn zag_prepare(c: &mut Circuit, qb: usize) -> Result<()> {
    c.push(Instruction::h(qb))
}

/// Second half of a zag: moves the state of `qa` onto `qb` up to `X^m`.
pub fn zag_finish(c: &mut Circuit, qa: usize, qb: usize, cbit: usize) -> Result<PauliFrame> {
    fresh(c, cbit)?;
    c.push(Instruction::cx(qb, qa))?;
    c.push(Instruction::measure(qa, cbit))?;
    Ok(PauliFrame::from_terms(vec![(ParityExpr::bit(cbit), wire(Pauli::X))]))
}

/// Single-qubit teleportation from `qa` to a fresh `qb`.
pub fn emit_zag(c: &mut Circuit, qa: usize, qb: usize, cbit: usize) -> Result<PauliFrame> {
    zag_prepare(c, qb)?;
    zag_finish(c, qa, qb, cbit)
}
