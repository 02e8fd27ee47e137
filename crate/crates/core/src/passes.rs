//! Splitting a static circuit into Clifford sections and non-Clifford phasors,
//! then pushing every Clifford past the phasors to the end.

use crate::circuit::{Axis, Circuit, Gate1, Instruction};
use crate::error::{QdcError, Result};
use crate::pauli::{clifford_quarter_turns, Pauli, PauliRotation, PauliString};
use crate::tableau::{CliffordGate, CliffordTableau};

#[derive(Clone, Debug, PartialEq)]
pub enum Section {
    Clifford {
        gates: Vec<CliffordGate>,
        tableau: CliffordTableau,
    },
    Phasor(PauliRotation),
}

/// Alternating Clifford sections and phasors. Always starts and ends with a
/// (possibly empty) Clifford section, and never holds two phasors or two
/// Clifford sections in a row.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionedCircuit {
    n_qubits: usize,
    sections: Vec<Section>,
}

impl SectionedCircuit {
    fn from_items(n: usize, items: Vec<Item>) -> Result<Self> {
        let mut sections = Vec::new();
        let mut pending: Vec<CliffordGate> = Vec::new();
        for it in items {
            match it {
                Item::Clifford(gs) => pending.extend(gs),
                Item::Phasor(r) => {
                    let gates = std::mem::take(&mut pending);
                    let tableau = CliffordTableau::from_gates(n, &gates)?;
                    sections.push(Section::Clifford { gates, tableau });
                    sections.push(Section::Phasor(r));
                }
            }
        }
        let tableau = CliffordTableau::from_gates(n, &pending)?;
        sections.push(Section::Clifford { gates: pending, tableau });
        Ok(SectionedCircuit { n_qubits: n, sections })
    }

    pub fn num_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn phasors(&self) -> impl Iterator<Item = &PauliRotation> {
        self.sections.iter().filter_map(|s| match s {
            Section::Phasor(r) => Some(r),
            _ => None,
        })
    }

    pub fn clifford_sections(&self) -> impl Iterator<Item = &[CliffordGate]> {
        self.sections.iter().filter_map(|s| match s {
            Section::Clifford { gates, .. } => Some(gates.as_slice()),
            _ => None,
        })
    }

    /// Replays the sections as a static circuit.
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.n_qubits, 0);
        for s in &self.sections {
            match s {
                Section::Clifford { gates, .. } => {
                    for &g in gates {
                        c.push(Instruction::from_clifford(g))?;
                    }
                }
                Section::Phasor(r) => c.push(rotation_instruction(r))?,
            }
        }
        Ok(c)
    }
}

/// Phasors `P'_j` followed by one Clifford `C`: the source equals `C · ∏ P'_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct PushedCircuit {
    pub n_qubits: usize,
    pub phasors: Vec<PauliRotation>,
    pub tail: CliffordTableau,
}

impl PushedCircuit {
    /// Static circuit of the phasors only (the Clifford tail is not lowered here).
    pub fn phasor_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.n_qubits, 0);
        for r in &self.phasors {
            c.push(rotation_instruction(r))?;
        }
        Ok(c)
    }
}

/// A full-register rotation as a `PauliRot` over its support.
pub fn rotation_instruction(r: &PauliRotation) -> Instruction {
    let support = r.pauli().support();
    let local = r.pauli().restrict(&support);
    Instruction::PauliRot {
        rotation: PauliRotation::new(local, r.angle()).expect("restriction of a Hermitian Pauli"),
        qubits: support,
    }
}

enum Item {
    Clifford(Vec<CliffordGate>),
    Phasor(PauliRotation),
}

/// Clifford gates realising `exp(-i·k·π/4·P)` up to global phase.
pub fn clifford_rotation_gates(p: &PauliString, quarter_turns: u8) -> Vec<CliffordGate> {
    let support = p.support();
    let k = quarter_turns % 4;
    if k == 0 || support.is_empty() {
        return Vec::new();
    }
    if k == 2 {
        // exp(-iπ/2·P) = -i·P.
        return support
            .iter()
            .map(|&q| match p.get(q) {
                Pauli::X => CliffordGate::X(q),
                Pauli::Y => CliffordGate::Y(q),
                _ => CliffordGate::Z(q),
            })
            .collect();
    }
    let mut pre = Vec::new();
    for &q in &support {
        match p.get(q) {
            Pauli::X => pre.push(CliffordGate::H(q)),
            Pauli::Y => {
                pre.push(CliffordGate::Sdg(q));
                pre.push(CliffordGate::H(q));
            }
            _ => {}
        }
    }
    let last = *support.last().unwrap();
    let ladder: Vec<CliffordGate> = support[..support.len() - 1]
        .iter()
        .map(|&q| CliffordGate::CX(q, last))
        .collect();
    let mut gates = pre.clone();
    gates.extend(ladder.iter().copied());
    gates.push(if k == 1 { CliffordGate::S(last) } else { CliffordGate::Sdg(last) });
    gates.extend(ladder.iter().rev().copied());
    gates.extend(pre.iter().rev().map(CliffordGate::inverse));
    gates
}

fn classify(r: PauliRotation) -> Item {
    if r.pauli().is_identity() {
        // Global phase only.
        return Item::Clifford(Vec::new());
    }
    match clifford_quarter_turns(r.angle()) {
        Some(k) => Item::Clifford(clifford_rotation_gates(r.pauli(), k)),
        None => Item::Phasor(r),
    }
}

fn lower(n: usize, ins: &Instruction) -> Result<Item> {
    Ok(match ins {
        Instruction::Gate1 { kind: Gate1::P(theta), qubit } => {
            classify(PauliRotation::new(PauliString::single(n, *qubit, Pauli::Z), *theta)?)
        }
        Instruction::Rot { axis, angle, qubit } => {
            let p = match axis {
                Axis::X => Pauli::X,
                Axis::Z => Pauli::Z,
            };
            classify(PauliRotation::new(PauliString::single(n, *qubit, p), *angle)?)
        }
        Instruction::PauliRot { rotation, qubits } => {
            classify(PauliRotation::new(rotation.pauli().embed(n, qubits)?, rotation.angle())?)
        }
        Instruction::Barrier { .. } => Item::Clifford(Vec::new()),
        other => match other.as_clifford() {
            Some(g) => Item::Clifford(vec![g]),
            None => return Err(QdcError::Unsupported(format!("{other:?}"))),
        },
    })
}

/// Splits a static circuit into Clifford sections and non-Clifford phasors.
///
/// Instructions are scheduled into ASAP moments; inside a moment phasors come
/// first, so Cliffords sharing a moment with a phasor join the following section.
pub fn compile_sections(c: &Circuit) -> Result<SectionedCircuit> {
    let n = c.num_qubits();
    let mut level = vec![0usize; n];
    let mut keyed = Vec::with_capacity(c.len());
    for (idx, ins) in c.instructions().iter().enumerate() {
        if ins.is_dynamic() {
            return Err(QdcError::Unsupported(format!("dynamic instruction {ins:?}")));
        }
        let item = lower(n, ins)?;
        let qs = ins.qubits();
        let moment = qs.iter().map(|&q| level[q]).max().unwrap_or(0);
        let moment = if matches!(ins, Instruction::Barrier { .. }) { moment } else { moment + 1 };
        for q in qs {
            level[q] = moment;
        }
        let rank = u8::from(matches!(item, Item::Clifford(_)));
        keyed.push(((moment, rank, idx), item));
    }
    keyed.sort_by_key(|(k, _)| *k);
    SectionedCircuit::from_items(n, keyed.into_iter().map(|(_, it)| it).collect())
}

/// Sections for input that is already a phasor list.
pub fn skip_compile_for_phasor_input(n: usize, phasors: &[PauliRotation]) -> Result<SectionedCircuit> {
    let items = phasors
        .iter()
        .map(|r| {
            if r.num_qubits() != n {
                return Err(QdcError::LengthMismatch(r.num_qubits(), n));
            }
            Ok(classify(r.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    SectionedCircuit::from_items(n, items)
}

/// `P'_j = A_j† P_j A_j` with `A_j` the product of every Clifford section before
/// `P_j`; the tail is the product of all sections.
pub fn push_cliffords(s: &SectionedCircuit) -> Result<PushedCircuit> {
    let n = s.num_qubits();
    let mut acc = CliffordTableau::identity(n);
    let mut phasors = Vec::new();
    for sec in s.sections() {
        match sec {
            Section::Clifford { tableau, .. } => acc = acc.then(tableau)?,
            Section::Phasor(r) => phasors.push(acc.inverse().conjugate_rotation(r)?),
        }
    }
    Ok(PushedCircuit { n_qubits: n, phasors, tail: acc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{rotation_matrix, unitary_of};

    #[test]
    fn clifford_angle_absorbed() {
        let mut c = Circuit::new(1, 0);
        c.push(Instruction::rz(std::f64::consts::FRAC_PI_2, 0)).unwrap();
        let s = compile_sections(&c).unwrap();
        assert_eq!(s.sections().len(), 1);
        assert_eq!(s.phasors().count(), 0);
    }

    #[test]
    fn single_phasor_has_empty_neighbours() {
        let mut c = Circuit::new(1, 0);
        c.push(Instruction::rz(0.3, 0)).unwrap();
        let s = compile_sections(&c).unwrap();
        assert_eq!(s.sections().len(), 3);
        let empties: Vec<usize> = s.clifford_sections().map(<[CliffordGate]>::len).collect();
        assert_eq!(empties, vec![0, 0]);
    }

    #[test]
    fn moment_assignment() {
        let mut c = Circuit::new(2, 0);
        c.push(Instruction::h(0)).unwrap();
        c.push(Instruction::rz(0.3, 0)).unwrap();
        c.push(Instruction::cx(0, 1)).unwrap();
        let s = compile_sections(&c).unwrap();
        let cs: Vec<&[CliffordGate]> = s.clifford_sections().collect();
        assert_eq!(cs, vec![&[CliffordGate::H(0)][..], &[CliffordGate::CX(0, 1)][..]]);

        // H(1) shares the phasor's moment, so it moves after the phasor.
        let mut c = Circuit::new(2, 0);
        c.push(Instruction::rz(0.3, 0)).unwrap();
        c.push(Instruction::h(1)).unwrap();
        let s = compile_sections(&c).unwrap();
        let cs: Vec<&[CliffordGate]> = s.clifford_sections().collect();
        assert_eq!(cs, vec![&[][..], &[CliffordGate::H(1)][..]]);
    }

    #[test]
    fn push_hadamard() {
        let mut c = Circuit::new(1, 0);
        c.push(Instruction::h(0)).unwrap();
        c.push(Instruction::rz(0.4, 0)).unwrap();
        let p = push_cliffords(&compile_sections(&c).unwrap()).unwrap();
        assert_eq!(p.phasors[0].pauli().to_string(), "X");
        assert!((p.phasors[0].angle() - 0.4).abs() < 1e-15);
        assert_eq!(p.tail, CliffordTableau::from_gates(1, &[CliffordGate::H(0)]).unwrap());
    }

    #[test]
    fn clifford_rotation_gates_match_dense() {
        for s in ["Z", "X", "Y", "XZ", "YIZ", "ZYX"] {
            let p: PauliString = s.parse().unwrap();
            for k in 1..4u8 {
                let angle = k as f64 * std::f64::consts::FRAC_PI_2;
                let c = Circuit::from_clifford_gates(p.num_qubits(), &clifford_rotation_gates(&p, k)).unwrap();
                let u = unitary_of(&c).unwrap();
                let d = rotation_matrix(&p, angle).diff_up_to_phase(&u);
                assert!(d < 1e-12, "{s} k={k}: {d}");
            }
        }
    }

    #[test]
    fn phasor_input_sections() {
        let z: PauliString = "Z".parse().unwrap();
        let s = skip_compile_for_phasor_input(1, &[PauliRotation::new(z.clone(), std::f64::consts::FRAC_PI_2).unwrap()])
            .unwrap();
        assert_eq!(s.phasors().count(), 0);
        let xx: PauliString = "XX".parse().unwrap();
        let s = skip_compile_for_phasor_input(2, &[PauliRotation::from_exponent(xx, 0.37).unwrap()]).unwrap();
        assert_eq!(s.phasors().count(), 1);
    }
}
