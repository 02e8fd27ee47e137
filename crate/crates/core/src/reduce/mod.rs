//! Constant-depth reduction of phasors and Clifford circuits with Bell-pair gadgets.
//!
//! Registers are laid out column-major on a grid: logical row `r` of column `c`
//! is physical qubit `c·rows + r`. Data starts in column 0; phasor ancillas live
//! in column 1; a Clifford snake of `d` sub-circuits spans columns `0..d`.
//!
//! Corrections are never applied as gates on data. They are tracked in a Pauli
//! frame over the logical rows, folded into conditional rotation signs where a
//! phasor needs them, and finally attached to the circuit as postprocessing.

mod clifford;
pub mod gadgets;
mod phasor;

pub use gadgets::{emit_cap, emit_cup, emit_zag};
pub use phasor::PhasorRecord;

use crate::circuit::{Circuit, GridLayout};
use crate::error::{QdcError, Result};
use crate::frame::{ParityExpr, PauliFrame};
use crate::pauli::{PauliRotation, PauliString};
use crate::tableau::CliffordTableau;

/// Depth of a reduced phasor of weight three or more, whatever the weight.
pub const D_PHASOR: usize = 8;

/// Extra depth of a snaked Clifford over its longest chunk: a cup (H, CX) before
/// and a cap (CX, H, measure) after.
pub const SNAKE_OVERHEAD: usize = 5;

/// Which snake connection joins two neighbouring ancilla rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Link {
    Cup,
    Cap,
    Zag,
}

/// Ancilla snake for a phasor spanning data rows `lo..=hi`.
///
/// Connection `k` joins rows `lo+k` and `lo+k+1`: caps at even `k`, cups at odd
/// `k`, and the last connection becomes a zag when the span is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakePlan {
    pub lo: usize,
    pub hi: usize,
    pub links: Vec<Link>,
}

impl SnakePlan {
    pub fn phasor(lo: usize, hi: usize) -> Result<Self> {
        if hi < lo {
            return Err(QdcError::Plan(format!("empty row range {lo}..={hi}")));
        }
        let len = hi - lo + 1;
        let links = (0..len.saturating_sub(1))
            .map(|k| {
                if len % 2 == 0 && k == len - 2 {
                    Link::Zag
                } else if k % 2 == 0 {
                    Link::Cap
                } else {
                    Link::Cup
                }
            })
            .collect();
        Ok(SnakePlan { lo, hi, links })
    }

    /// Plan covering the support of `r`.
    pub fn for_rotation(r: &PauliRotation) -> Result<Self> {
        let support = r.pauli().support();
        match (support.first(), support.last()) {
            (Some(&lo), Some(&hi)) => Self::phasor(lo, hi),
            _ => Err(QdcError::Plan("identity rotation has no support".into())),
        }
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn pairs(&self, kind: Link) -> Vec<(usize, usize)> {
        self.links
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == kind)
            .map(|(k, _)| (self.lo + k, self.lo + k + 1))
            .collect()
    }

    /// Row pairs joined by cups.
    pub fn cups(&self) -> Vec<(usize, usize)> {
        self.pairs(Link::Cup)
    }

    pub fn caps(&self) -> Vec<(usize, usize)> {
        self.pairs(Link::Cap)
    }

    pub fn zag(&self) -> Option<(usize, usize)> {
        self.pairs(Link::Zag).first().copied()
    }
}

/// A dynamic circuit with its frame bookkeeping.
#[derive(Clone, Debug)]
pub struct ReducedFragment {
    /// Carries the outgoing frame as postprocessing and `outputs` set to the data.
    pub circuit: Circuit,
    pub layout: GridLayout,
    /// Physical qubit holding each logical input row.
    pub inputs: Vec<usize>,
    /// Physical qubit holding each logical output row.
    pub outputs: Vec<usize>,
    pub incoming_frame: PauliFrame,
    /// Logical-row frame after the fragment.
    pub outgoing_frame: PauliFrame,
    /// Measured qubits left in the classical state given by their expression.
    pub ancilla_release: Vec<(usize, ParityExpr)>,
    pub phasors: Vec<PhasorRecord>,
}

/// Emits phasor and Clifford reductions onto one grid register.
///
/// Ancillas are never reset: a measured qubit stays in `|m⟩`, and the next gadget
/// that uses it accounts for that as a known X error.
#[derive(Clone, Debug)]
pub struct DynamicBuilder {
    circuit: Circuit,
    layout: GridLayout,
    rows: usize,
    inputs: Vec<usize>,
    data: Vec<usize>,
    known: Vec<ParityExpr>,
    measured: Vec<bool>,
    incoming: PauliFrame,
    frame: PauliFrame,
    phasors: Vec<PhasorRecord>,
}

impl DynamicBuilder {
    /// `rows` logical qubits on a `rows × cols` column-major grid.
    pub fn new(rows: usize, cols: usize) -> Self {
        let total = rows * cols;
        DynamicBuilder {
            circuit: Circuit::new(total, 0),
            layout: GridLayout::column_major(rows, cols),
            rows,
            inputs: (0..rows).collect(),
            data: (0..rows).collect(),
            known: vec![ParityExpr::zero(); total],
            measured: vec![false; total],
            incoming: PauliFrame::new(),
            frame: PauliFrame::new(),
            phasors: Vec::new(),
        }
    }

    /// Starts from a frame whose expressions are constants, e.g. a known Pauli error.
    pub fn with_incoming(mut self, frame: PauliFrame) -> Result<Self> {
        for (e, p) in frame.terms() {
            if !e.bits().is_empty() {
                return Err(QdcError::Plan(format!("incoming term {e} reads bits of another circuit")));
            }
            if p.num_qubits() != self.rows {
                return Err(QdcError::LengthMismatch(p.num_qubits(), self.rows));
            }
        }
        self.frame = frame.clone();
        self.incoming = frame;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn layout(&self) -> &GridLayout {
        &self.layout
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Current logical frame.
    pub fn frame(&self) -> &PauliFrame {
        &self.frame
    }

    pub fn data_qubits(&self) -> &[usize] {
        &self.data
    }

    fn qubit(&self, row: usize, col: usize) -> usize {
        col * self.rows + row
    }

    fn alloc(&mut self) -> usize {
        self.circuit.alloc_cbit()
    }

    fn mark_measured(&mut self, q: usize, cbit: usize) {
        self.known[q] = ParityExpr::bit(cbit);
        self.measured[q] = true;
    }

    fn push_frame(&mut self, expr: ParityExpr, p: PauliString) {
        self.frame.push(expr, p);
        self.frame = self.frame.normalized();
    }

    pub fn finish(mut self) -> Result<ReducedFragment> {
        let n = self.circuit.num_qubits();
        let mut post = PauliFrame::new();
        for (e, p) in self.frame.terms() {
            post.push(e.clone(), p.embed(n, &self.data)?);
        }
        self.circuit.set_postprocessing(post)?;
        self.circuit.set_outputs(self.data.clone())?;
        let ancilla_release = (0..n)
            .filter(|&q| self.measured[q])
            .map(|q| (q, self.known[q].clone()))
            .collect();
        Ok(ReducedFragment {
            circuit: self.circuit,
            layout: self.layout,
            inputs: self.inputs,
            outputs: self.data,
            incoming_frame: self.incoming,
            outgoing_frame: self.frame,
            ancilla_release,
            phasors: self.phasors,
        })
    }
}

/// Reduces one non-Clifford rotation on a fresh `w × 2` register (`w` = width of `r`).
pub fn reduce_phasor(r: &PauliRotation, plan: &SnakePlan, incoming: &PauliFrame) -> Result<ReducedFragment> {
    let mut b = DynamicBuilder::new(r.num_qubits(), 2).with_incoming(incoming.clone())?;
    b.phasor_with_plan(r, plan)?;
    b.finish()
}

/// Snakes a Clifford suffix across `d` columns of a fresh `n × d` register.
pub fn reduce_clifford(suffix: &Circuit, d: usize) -> Result<ReducedFragment> {
    let mut b = DynamicBuilder::new(suffix.num_qubits(), d.max(1));
    b.clifford(suffix, d)?;
    b.finish()
}

/// Reduces `next` onto the register of `prev`, reusing its measured ancillas in
/// place: their known outcomes become corrections instead of resets.
pub fn eliminate_resets(prev: &ReducedFragment, next: &PauliRotation, plan: &SnakePlan) -> Result<ReducedFragment> {
    let rows = prev.outputs.len();
    if prev.layout.rows() != rows || prev.outputs.iter().enumerate().any(|(r, &q)| q != r) {
        return Err(QdcError::Plan("phasors need the data in column 0".into()));
    }
    let mut b = DynamicBuilder::new(rows, prev.layout.cols());
    let mut circuit = prev.circuit.clone();
    circuit.set_postprocessing(PauliFrame::new())?;
    b.circuit = circuit;
    b.inputs = prev.inputs.clone();
    b.incoming = prev.incoming_frame.clone();
    b.frame = prev.outgoing_frame.clone();
    b.phasors = prev.phasors.clone();
    for (q, e) in &prev.ancilla_release {
        if *q >= b.known.len() {
            return Err(QdcError::QubitOutOfRange(*q, b.known.len()));
        }
        b.known[*q] = e.clone();
        b.measured[*q] = true;
    }
    b.phasor_with_plan(next, plan)?;
    b.finish()
}

/// A downstream element that a frame is pushed through.
#[derive(Clone, Debug)]
pub enum Stage {
    Clifford(CliffordTableau),
    /// A static rotation; frame terms must commute with it.
    Rotation(PauliRotation),
}

/// Pushes `frame` through `downstream` to the end of the circuit.
pub fn push_frame_to_post(frame: &PauliFrame, downstream: &[Stage]) -> Result<PauliFrame> {
    let mut f = frame.normalized();
    for stage in downstream {
        match stage {
            Stage::Clifford(t) => f = f.conjugate(t)?.normalized(),
            Stage::Rotation(r) => {
                for (e, p) in f.terms() {
                    if !p.commutes(r.pauli())? {
                        return Err(QdcError::Unsupported(format!(
                            "frame term {e}:{p} anticommutes with static rotation on {}",
                            r.pauli()
                        )));
                    }
                }
            }
        }
    }
    Ok(f)
}

/// Which Z-basis outcomes a frame flips, given the recorded bits.
pub fn classical_flips(frame: &PauliFrame, n: usize, cbits: &[Option<bool>]) -> Result<Vec<bool>> {
    let p = frame.resolve(n, cbits)?;
    Ok((0..n).map(|q| p.x(q)).collect())
}
