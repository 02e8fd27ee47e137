//! Classical parity expressions and measurement-conditioned Pauli frames.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{QdcError, Result};
use crate::pauli::PauliString;
use crate::tableau::CliffordTableau;

/// `constant ⊕ (⊕ of the referenced classical bits)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParityExpr {
    bits: BTreeSet<usize>,
    constant: bool,
}

impl ParityExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        ParityExpr {
            bits: BTreeSet::new(),
            constant: true,
        }
    }

    pub fn bit(c: usize) -> Self {
        ParityExpr {
            bits: BTreeSet::from([c]),
            constant: false,
        }
    }

    pub fn constant(value: bool) -> Self {
        if value {
            Self::one()
        } else {
            Self::zero()
        }
    }

    pub fn from_bits<I: IntoIterator<Item = usize>>(bits: I, constant: bool) -> Self {
        let mut e = Self::constant(constant);
        for b in bits {
            e.toggle_bit(b);
        }
        e
    }

    pub fn bits(&self) -> &BTreeSet<usize> {
        &self.bits
    }

    pub fn constant_term(&self) -> bool {
        self.constant
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_empty() && !self.constant
    }

    pub fn toggle_bit(&mut self, c: usize) {
        if !self.bits.remove(&c) {
            self.bits.insert(c);
        }
    }

    pub fn xor(&self, other: &ParityExpr) -> ParityExpr {
        ParityExpr {
            bits: self.bits.symmetric_difference(&other.bits).copied().collect(),
            constant: self.constant ^ other.constant,
        }
    }

    pub fn xor_assign(&mut self, other: &ParityExpr) {
        for &b in &other.bits {
            self.toggle_bit(b);
        }
        self.constant ^= other.constant;
    }

    /// Evaluates against a classical assignment; `None` if a bit is unbound.
    pub fn eval(&self, cbits: &[Option<bool>]) -> Option<bool> {
        let mut v = self.constant;
        for &b in &self.bits {
            v ^= (*cbits.get(b)?)?;
        }
        Some(v)
    }

    pub fn max_bit(&self) -> Option<usize> {
        self.bits.iter().next_back().copied()
    }

    /// Shifts every bit index by `offset`.
    pub fn shifted(&self, offset: usize) -> ParityExpr {
        ParityExpr {
            bits: self.bits.iter().map(|b| b + offset).collect(),
            constant: self.constant,
        }
    }
}

impl fmt::Display for ParityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return write!(f, "{}", self.constant as u8);
        }
        let mut first = true;
        for b in &self.bits {
            if !first {
                write!(f, "^")?;
            }
            write!(f, "c{b}")?;
            first = false;
        }
        if self.constant {
            write!(f, "^1")?;
        }
        Ok(())
    }
}

impl FromStr for ParityExpr {
    type Err = QdcError;

    fn from_str(s: &str) -> Result<Self> {
        let mut e = ParityExpr::zero();
        for tok in s.split('^') {
            match tok {
                "0" => {}
                "1" => e.constant ^= true,
                t => {
                    let idx = t
                        .strip_prefix('c')
                        .and_then(|d| d.parse::<usize>().ok())
                        .ok_or_else(|| QdcError::Parse(format!("bad parity term {t:?}")))?;
                    e.toggle_bit(idx);
                }
            }
        }
        Ok(e)
    }
}

/// Ordered list of measurement-conditioned Pauli corrections.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PauliFrame {
    terms: Vec<(ParityExpr, PauliString)>,
    phase_notes: usize,
}

impl PauliFrame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<(ParityExpr, PauliString)>) -> Self {
        PauliFrame {
            terms,
            phase_notes: 0,
        }
    }

    pub fn terms(&self) -> &[(ParityExpr, PauliString)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Number of sign residues dropped while conjugating or normalising.
    pub fn phase_notes(&self) -> usize {
        self.phase_notes
    }

    pub fn push(&mut self, expr: ParityExpr, pauli: PauliString) {
        if !expr.is_zero() && !pauli.is_identity() {
            self.terms.push((expr, pauli));
        }
    }

    pub fn extend(&mut self, other: &PauliFrame) {
        for (e, p) in &other.terms {
            self.push(e.clone(), p.clone());
        }
        self.phase_notes += other.phase_notes;
    }

    /// Product of the selected Paulis, in listed order.
    pub fn resolve(&self, n: usize, cbits: &[Option<bool>]) -> Result<PauliString> {
        let mut acc = PauliString::identity(n);
        for (e, p) in &self.terms {
            let on = e
                .eval(cbits)
                .ok_or_else(|| QdcError::Simulation(format!("unbound bit in {e}")))?;
            if on {
                acc = acc.multiply(p)?;
            }
        }
        Ok(acc)
    }

    /// Conjugates every term through `t`; sign residues are dropped.
    pub fn conjugate(&self, t: &CliffordTableau) -> Result<PauliFrame> {
        let mut out = PauliFrame {
            terms: Vec::with_capacity(self.terms.len()),
            phase_notes: self.phase_notes,
        };
        for (e, p) in &self.terms {
            let img = t.conjugate(p)?;
            if img.phase() != 0 {
                out.phase_notes += 1;
            }
            out.push(e.clone(), img.unsigned());
        }
        Ok(out)
    }

    /// Merges terms sharing the same expression and cancels duplicates.
    pub fn normalized(&self) -> PauliFrame {
        let mut merged: Vec<(ParityExpr, PauliString)> = Vec::new();
        let mut notes = self.phase_notes;
        for (e, p) in &self.terms {
            if let Some(slot) = merged.iter_mut().find(|(me, _)| me == e) {
                let prod = slot.1.multiply(p).expect("frame terms share a width");
                if prod.phase() != 0 {
                    notes += 1;
                }
                slot.1 = prod.unsigned();
            } else {
                merged.push((e.clone(), p.unsigned()));
            }
        }
        merged.retain(|(e, p)| !e.is_zero() && !p.is_identity());
        PauliFrame {
            terms: merged,
            phase_notes: notes,
        }
    }

    /// Per-qubit view: the X- and Z-exponent expressions on each qubit.
    pub fn per_qubit(&self, n: usize) -> Vec<(ParityExpr, ParityExpr)> {
        let mut out = vec![(ParityExpr::zero(), ParityExpr::zero()); n];
        for (e, p) in &self.terms {
            for q in 0..n.min(p.num_qubits()) {
                if p.x(q) {
                    out[q].0.xor_assign(e);
                }
                if p.z(q) {
                    out[q].1.xor_assign(e);
                }
            }
        }
        out
    }

    /// Re-expresses the frame on a larger register by mapping qubit `k` to `map[k]`.
    pub fn remap(&self, n: usize, map: &[usize]) -> Result<PauliFrame> {
        let mut out = PauliFrame {
            terms: Vec::new(),
            phase_notes: self.phase_notes,
        };
        for (e, p) in &self.terms {
            out.push(e.clone(), p.embed(n, map)?);
        }
        Ok(out)
    }

    /// Restricts every term to `qubits`.
    pub fn restrict(&self, qubits: &[usize]) -> PauliFrame {
        let mut out = PauliFrame {
            terms: Vec::new(),
            phase_notes: self.phase_notes,
        };
        for (e, p) in &self.terms {
            out.push(e.clone(), p.restrict(qubits));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::{CliffordGate, CliffordTableau};

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn parity_text() {
        let e: ParityExpr = "c3^c1^1".parse().unwrap();
        assert_eq!(e.to_string(), "c1^c3^1");
        assert_eq!("0".parse::<ParityExpr>().unwrap(), ParityExpr::zero());
        assert_eq!("c2^c2".parse::<ParityExpr>().unwrap(), ParityExpr::zero());
        assert!("d2".parse::<ParityExpr>().is_err());
    }

    #[test]
    fn parity_eval_and_xor() {
        let a = ParityExpr::from_bits([0, 1], false);
        let b = ParityExpr::from_bits([1, 2], true);
        let c = a.xor(&b);
        assert_eq!(c, ParityExpr::from_bits([0, 2], true));
        let bits = [Some(true), Some(false), Some(true)];
        assert_eq!(c.eval(&bits), Some(true));
        assert_eq!(a.eval(&bits[..1]), None);
    }

    #[test]
    fn frame_conjugation_examples() {
        let empty = PauliFrame::new();
        let h = CliffordTableau::from_gates(1, &[CliffordGate::H(0)]).unwrap();
        assert!(empty.conjugate(&h).unwrap().is_empty());

        let f = PauliFrame::from_terms(vec![(ParityExpr::bit(1), p("Z"))]);
        assert_eq!(f.conjugate(&h).unwrap().terms()[0].1, p("X"));

        let cx = CliffordTableau::from_gates(2, &[CliffordGate::CX(0, 1)]).unwrap();
        let f = PauliFrame::from_terms(vec![(ParityExpr::bit(1), p("XI"))]);
        assert_eq!(f.conjugate(&cx).unwrap().terms()[0].1, p("XX"));
    }

    #[test]
    fn resolve_in_order() {
        let f = PauliFrame::from_terms(vec![
            (ParityExpr::bit(0), p("X")),
            (ParityExpr::bit(1), p("Z")),
        ]);
        let r = f.resolve(1, &[Some(true), Some(true)]).unwrap();
        assert_eq!(r, p("-iY"));
        let r = f.resolve(1, &[Some(false), Some(true)]).unwrap();
        assert_eq!(r, p("Z"));
    }

    #[test]
    fn normalization_cancels_duplicates() {
        let f = PauliFrame::from_terms(vec![
            (ParityExpr::bit(0), p("XZ")),
            (ParityExpr::bit(0), p("XZ")),
            (ParityExpr::bit(1), p("ZI")),
        ]);
        let n = f.normalized();
        assert_eq!(n.len(), 1);
        assert_eq!(n.terms()[0].1, p("ZI"));
    }
}
