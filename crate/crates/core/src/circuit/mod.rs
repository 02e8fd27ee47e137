//! Circuit representation with dynamic-circuit instructions.

mod layout;
mod metrics;
mod text;

pub use layout::{GridLayout, Violation};
pub use metrics::Metrics;
pub use text::{parse, serialize};

use std::collections::BTreeSet;

use crate::error::{QdcError, Result};
use crate::frame::{ParityExpr, PauliFrame};
use crate::pauli::{Pauli, PauliRotation, PauliString};
use crate::tableau::CliffordGate;

/// Two-qubit instructions of `c` that are not grid-adjacent under `g`.
pub fn check_layout(c: &Circuit, g: &GridLayout) -> Result<Vec<Violation>> {
    g.check(c)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate1 {
    H,
    S,
    Sdg,
    X,
    Y,
    Z,
    /// `diag(1, e^{iθ})`.
    P(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate2 {
    CX,
    CZ,
    Swap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Z,
}

impl Axis {
    pub fn pauli(self) -> Pauli {
        match self {
            Axis::X => Pauli::X,
            Axis::Z => Pauli::Z,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Gate1 { kind: Gate1, qubit: usize },
    /// `exp(-i·angle/2·σ_axis)`.
    Rot { axis: Axis, angle: f64, qubit: usize },
    Gate2 { kind: Gate2, a: usize, b: usize },
    /// Rotation on `qubits`; character `k` of the Pauli acts on `qubits[k]`.
    PauliRot {
        rotation: PauliRotation,
        qubits: Vec<usize>,
    },
    Measure { qubit: usize, cbit: usize, basis: Basis },
    Reset { qubit: usize },
    CondPauli { expr: ParityExpr, pauli: Axis, qubit: usize },
    /// `Rot(axis, (-1)^sign · angle)`.
    CondSignRot {
        axis: Axis,
        angle: f64,
        sign: ParityExpr,
        qubit: usize,
    },
    Barrier { qubits: Vec<usize> },
}

impl Instruction {
    pub fn h(q: usize) -> Self {
        Instruction::Gate1 { kind: Gate1::H, qubit: q }
    }

    pub fn s(q: usize) -> Self {
        Instruction::Gate1 { kind: Gate1::S, qubit: q }
    }

    pub fn sdg(q: usize) -> Self {
        Instruction::Gate1 { kind: Gate1::Sdg, qubit: q }
    }

    pub fn cx(a: usize, b: usize) -> Self {
        Instruction::Gate2 { kind: Gate2::CX, a, b }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Instruction::Gate2 { kind: Gate2::CZ, a, b }
    }

    pub fn rz(angle: f64, q: usize) -> Self {
        Instruction::Rot { axis: Axis::Z, angle, qubit: q }
    }

    pub fn rx(angle: f64, q: usize) -> Self {
        Instruction::Rot { axis: Axis::X, angle, qubit: q }
    }

    pub fn measure(q: usize, c: usize) -> Self {
        Instruction::Measure { qubit: q, cbit: c, basis: Basis::Z }
    }

    pub fn qubits(&self) -> Vec<usize> {
        use Instruction::*;
        match self {
            Gate1 { qubit, .. }
            | Rot { qubit, .. }
            | Measure { qubit, .. }
            | Reset { qubit }
            | CondPauli { qubit, .. }
            | CondSignRot { qubit, .. } => vec![*qubit],
            Gate2 { a, b, .. } => vec![*a, *b],
            PauliRot { qubits, .. } | Barrier { qubits } => qubits.clone(),
        }
    }

    /// Classical bits read by this instruction.
    pub fn reads(&self) -> Option<&ParityExpr> {
        match self {
            Instruction::CondPauli { expr, .. } => Some(expr),
            Instruction::CondSignRot { sign, .. } => Some(sign),
            _ => None,
        }
    }

    pub fn is_dynamic(&self) -> bool {
        matches!(
            self,
            Instruction::Measure { .. }
                | Instruction::Reset { .. }
                | Instruction::CondPauli { .. }
                | Instruction::CondSignRot { .. }
        )
    }

    /// Clifford form of a gate instruction, if it has one without phase angles.
    pub fn as_clifford(&self) -> Option<CliffordGate> {
        use Instruction::*;
        match *self {
            Gate1 { kind, qubit } => match kind {
                self::Gate1::H => Some(CliffordGate::H(qubit)),
                self::Gate1::S => Some(CliffordGate::S(qubit)),
                self::Gate1::Sdg => Some(CliffordGate::Sdg(qubit)),
                self::Gate1::X => Some(CliffordGate::X(qubit)),
                self::Gate1::Y => Some(CliffordGate::Y(qubit)),
                self::Gate1::Z => Some(CliffordGate::Z(qubit)),
                self::Gate1::P(_) => None,
            },
            Gate2 { kind, a, b } => Some(match kind {
                self::Gate2::CX => CliffordGate::CX(a, b),
                self::Gate2::CZ => CliffordGate::CZ(a, b),
                self::Gate2::Swap => CliffordGate::Swap(a, b),
            }),
            _ => None,
        }
    }

    pub fn from_clifford(g: CliffordGate) -> Instruction {
        use CliffordGate as C;
        let g1 = |kind, qubit| Instruction::Gate1 { kind, qubit };
        let g2 = |kind, a, b| Instruction::Gate2 { kind, a, b };
        match g {
            C::H(q) => g1(Gate1::H, q),
            C::S(q) => g1(Gate1::S, q),
            C::Sdg(q) => g1(Gate1::Sdg, q),
            C::X(q) => g1(Gate1::X, q),
            C::Y(q) => g1(Gate1::Y, q),
            C::Z(q) => g1(Gate1::Z, q),
            C::CX(a, b) => g2(Gate2::CX, a, b),
            C::CZ(a, b) => g2(Gate2::CZ, a, b),
            C::Swap(a, b) => g2(Gate2::Swap, a, b),
        }
    }

    /// Relabels qubits through `qmap` and shifts classical bits by `cbit_offset`.
    pub fn remap(&self, qmap: &[usize], cbit_offset: usize) -> Instruction {
        use Instruction::*;
        match self {
            Gate1 { kind, qubit } => Gate1 { kind: *kind, qubit: qmap[*qubit] },
            Rot { axis, angle, qubit } => Rot { axis: *axis, angle: *angle, qubit: qmap[*qubit] },
            Gate2 { kind, a, b } => Gate2 { kind: *kind, a: qmap[*a], b: qmap[*b] },
            PauliRot { rotation, qubits } => PauliRot {
                rotation: rotation.clone(),
                qubits: qubits.iter().map(|&q| qmap[q]).collect(),
            },
            Measure { qubit, cbit, basis } => Measure {
                qubit: qmap[*qubit],
                cbit: cbit + cbit_offset,
                basis: *basis,
            },
            Reset { qubit } => Reset { qubit: qmap[*qubit] },
            CondPauli { expr, pauli, qubit } => CondPauli {
                expr: expr.shifted(cbit_offset),
                pauli: *pauli,
                qubit: qmap[*qubit],
            },
            CondSignRot { axis, angle, sign, qubit } => CondSignRot {
                axis: *axis,
                angle: *angle,
                sign: sign.shifted(cbit_offset),
                qubit: qmap[*qubit],
            },
            Barrier { qubits } => Barrier { qubits: qubits.iter().map(|&q| qmap[q]).collect() },
        }
    }
}

/// A validated instruction list over `n_qubits` qubits and `n_cbits` classical bits.
///
/// Every instruction is checked on insertion: indices in range, distinct two-qubit
/// operands, and every classical bit read only after a measurement wrote it.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_cbits: usize,
    instructions: Vec<Instruction>,
    postprocessing: PauliFrame,
    outputs: Option<Vec<usize>>,
    name: Option<String>,
    tags: Vec<String>,
    written: BTreeSet<usize>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_cbits: usize) -> Self {
        Circuit {
            n_qubits,
            n_cbits,
            instructions: Vec::new(),
            postprocessing: PauliFrame::new(),
            outputs: None,
            name: None,
            tags: Vec::new(),
            written: BTreeSet::new(),
        }
    }

    /// Static circuit from Clifford gates.
    pub fn from_clifford_gates(n_qubits: usize, gates: &[CliffordGate]) -> Result<Self> {
        let mut c = Circuit::new(n_qubits, 0);
        for &g in gates {
            c.push(Instruction::from_clifford(g))?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn num_cbits(&self) -> usize {
        self.n_cbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn postprocessing(&self) -> &PauliFrame {
        &self.postprocessing
    }

    /// Qubits carrying the logical output, in logical order. Defaults to `0..n`.
    pub fn outputs(&self) -> Option<&[usize]> {
        self.outputs.as_deref()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = Some(name.into());
    }

    pub fn add_tag(&mut self, tag: impl Into<String>) {
        self.tags.push(tag.into());
    }

    pub fn set_outputs(&mut self, outputs: Vec<usize>) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &q in &outputs {
            self.check_qubit(q)?;
            if !seen.insert(q) {
                return Err(QdcError::InvalidCircuit(format!("output qubit {q} repeated")));
            }
        }
        self.outputs = Some(outputs);
        Ok(())
    }

    /// Appends a fresh classical bit and returns its index.
    pub fn alloc_cbit(&mut self) -> usize {
        self.n_cbits += 1;
        self.n_cbits - 1
    }

    /// Whether a measurement already wrote classical bit `c`.
    pub fn cbit_written(&self, c: usize) -> bool {
        self.written.contains(&c)
    }

    /// Grows the classical register to at least `n`.
    pub fn ensure_cbits(&mut self, n: usize) {
        self.n_cbits = self.n_cbits.max(n);
    }

    pub fn push(&mut self, mut ins: Instruction) -> Result<()> {
        // Symmetric gates are stored with ascending operands.
        if let Instruction::Gate2 { kind: Gate2::CZ | Gate2::Swap, a, b } = &mut ins {
            if *a > *b {
                std::mem::swap(a, b);
            }
        }
        for q in ins.qubits() {
            self.check_qubit(q)?;
        }
        match &ins {
            Instruction::Gate2 { a, b, .. } if a == b => {
                return Err(QdcError::InvalidCircuit("identical qubits".into()));
            }
            Instruction::PauliRot { rotation, qubits } => {
                if rotation.num_qubits() != qubits.len() {
                    return Err(QdcError::LengthMismatch(rotation.num_qubits(), qubits.len()));
                }
                let distinct: BTreeSet<_> = qubits.iter().collect();
                if distinct.len() != qubits.len() {
                    return Err(QdcError::InvalidCircuit("identical qubits".into()));
                }
            }
            Instruction::Measure { cbit, .. } => {
                if *cbit >= self.n_cbits {
                    return Err(QdcError::InvalidCircuit(format!(
                        "cbit {cbit} out of range for {} cbits",
                        self.n_cbits
                    )));
                }
            }
            _ => {}
        }
        if let Some(expr) = ins.reads() {
            self.check_expr(expr)?;
        }
        if let Instruction::Measure { cbit, .. } = ins {
            self.written.insert(cbit);
        }
        self.instructions.push(ins);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Instruction>>(&mut self, it: I) -> Result<()> {
        for ins in it {
            self.push(ins)?;
        }
        Ok(())
    }

    /// Appends a deferred correction to the postprocessing frame.
    pub fn push_post(&mut self, expr: ParityExpr, pauli: PauliString) -> Result<()> {
        if pauli.num_qubits() != self.n_qubits {
            return Err(QdcError::LengthMismatch(pauli.num_qubits(), self.n_qubits));
        }
        self.check_expr(&expr)?;
        self.postprocessing.push(expr, pauli);
        Ok(())
    }

    pub fn set_postprocessing(&mut self, frame: PauliFrame) -> Result<()> {
        for (e, p) in frame.terms() {
            if p.num_qubits() != self.n_qubits {
                return Err(QdcError::LengthMismatch(p.num_qubits(), self.n_qubits));
            }
            self.check_expr(e)?;
        }
        self.postprocessing = frame;
        Ok(())
    }

    /// Appends `other` with its qubits relabelled through `qmap` and its
    /// classical bits shifted by `cbit_offset`.
    pub fn append_mapped(&mut self, other: &Circuit, qmap: &[usize], cbit_offset: usize) -> Result<()> {
        self.ensure_cbits(other.n_cbits + cbit_offset);
        for ins in &other.instructions {
            self.push(ins.remap(qmap, cbit_offset))?;
        }
        Ok(())
    }

    /// Appends `other` on the same register.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        let id: Vec<usize> = (0..other.n_qubits).collect();
        self.append_mapped(other, &id, 0)
    }

    /// Clifford gate list, or an error naming the first non-Clifford instruction.
    pub fn clifford_gates(&self) -> Result<Vec<CliffordGate>> {
        self.instructions
            .iter()
            .map(|ins| {
                ins.as_clifford()
                    .ok_or_else(|| QdcError::NonClifford(format!("{ins:?}")))
            })
            .collect()
    }

    pub fn is_static(&self) -> bool {
        !self.instructions.iter().any(Instruction::is_dynamic)
    }

    pub fn count_resets(&self) -> usize {
        self.instructions
            .iter()
            .filter(|i| matches!(i, Instruction::Reset { .. }))
            .count()
    }

    pub fn metrics(&self) -> Metrics {
        Metrics::of(self)
    }

    pub fn depth(&self) -> usize {
        metrics::depth(self)
    }

    pub fn cx_count(&self) -> usize {
        metrics::cx_count(self)
    }

    /// Last classical bit written by a measurement of `qubit`.
    pub fn last_measurement(&self, qubit: usize) -> Option<usize> {
        self.instructions.iter().rev().find_map(|i| match i {
            Instruction::Measure { qubit: q, cbit, .. } if *q == qubit => Some(*cbit),
            _ => None,
        })
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(QdcError::QubitOutOfRange(q, self.n_qubits));
        }
        Ok(())
    }

    fn check_expr(&self, expr: &ParityExpr) -> Result<()> {
        for b in expr.bits() {
            if !self.written.contains(b) {
                return Err(QdcError::InvalidCircuit(format!(
                    "cbit c{b} read before any measurement wrote it"
                )));
            }
        }
        Ok(())
    }
}
