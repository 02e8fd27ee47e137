//! Clifford tableaux: the conjugation action of a Clifford on the Pauli group.

use std::fmt;

use crate::error::{QdcError, Result};
use crate::pauli::{Pauli, PauliRotation, PauliString};

/// Clifford generators understood by the tableau.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    S(usize),
    Sdg(usize),
    X(usize),
    Y(usize),
    Z(usize),
    CX(usize, usize),
    CZ(usize, usize),
    Swap(usize, usize),
}

impl CliffordGate {
    pub fn qubits(&self) -> Vec<usize> {
        use CliffordGate::*;
        match *self {
            H(q) | S(q) | Sdg(q) | X(q) | Y(q) | Z(q) => vec![q],
            CX(a, b) | CZ(a, b) | Swap(a, b) => vec![a, b],
        }
    }

    pub fn inverse(&self) -> CliffordGate {
        match *self {
            CliffordGate::S(q) => CliffordGate::Sdg(q),
            CliffordGate::Sdg(q) => CliffordGate::S(q),
            g => g,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(
            self,
            CliffordGate::CX(..) | CliffordGate::CZ(..) | CliffordGate::Swap(..)
        )
    }

    /// Relabels qubits through `map`.
    pub fn remap(&self, map: &[usize]) -> CliffordGate {
        use CliffordGate::*;
        match *self {
            H(q) => H(map[q]),
            S(q) => S(map[q]),
            Sdg(q) => Sdg(map[q]),
            X(q) => X(map[q]),
            Y(q) => Y(map[q]),
            Z(q) => Z(map[q]),
            CX(a, b) => CX(map[a], map[b]),
            CZ(a, b) => CZ(map[a], map[b]),
            Swap(a, b) => Swap(map[a], map[b]),
        }
    }

    /// Replaces `p` by `G p G†`.
    pub fn conjugate_in_place(&self, p: &mut PauliString) {
        let flip = |p: &mut PauliString, cond: bool| {
            if cond {
                let ph = p.phase();
                p.set_phase(ph + 2);
            }
        };
        match *self {
            CliffordGate::H(q) => {
                let (x, z) = (p.x(q), p.z(q));
                flip(p, x && z);
                p.set_bits(q, z, x);
            }
            CliffordGate::S(q) => {
                let (x, z) = (p.x(q), p.z(q));
                flip(p, x && z);
                p.set_bits(q, x, z ^ x);
            }
            CliffordGate::Sdg(q) => {
                let (x, z) = (p.x(q), p.z(q));
                flip(p, x && !z);
                p.set_bits(q, x, z ^ x);
            }
            CliffordGate::X(q) => {
                let z = p.z(q);
                flip(p, z);
            }
            CliffordGate::Y(q) => {
                let (x, z) = (p.x(q), p.z(q));
                flip(p, x ^ z);
            }
            CliffordGate::Z(q) => {
                let x = p.x(q);
                flip(p, x);
            }
            CliffordGate::CX(c, t) => {
                let (xc, zc, xt, zt) = (p.x(c), p.z(c), p.x(t), p.z(t));
                flip(p, xc && zt && !(xt ^ zc));
                p.set_bits(t, xt ^ xc, zt);
                p.set_bits(c, xc, zc ^ zt);
            }
            CliffordGate::CZ(a, b) => {
                CliffordGate::H(b).conjugate_in_place(p);
                CliffordGate::CX(a, b).conjugate_in_place(p);
                CliffordGate::H(b).conjugate_in_place(p);
            }
            CliffordGate::Swap(a, b) => {
                let (pa, pb) = (p.get(a), p.get(b));
                p.set(a, pb);
                p.set(b, pa);
            }
        }
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CliffordGate::*;
        match *self {
            H(q) => write!(f, "h {q}"),
            S(q) => write!(f, "s {q}"),
            Sdg(q) => write!(f, "sdg {q}"),
            X(q) => write!(f, "x {q}"),
            Y(q) => write!(f, "y {q}"),
            Z(q) => write!(f, "z {q}"),
            CX(a, b) => write!(f, "cx {a} {b}"),
            CZ(a, b) => write!(f, "cz {a} {b}"),
            Swap(a, b) => write!(f, "swap {a} {b}"),
        }
    }
}

/// Images of `X_i` and `Z_i` under `P ↦ C P C†`.
#[derive(Clone, PartialEq, Eq)]
pub struct CliffordTableau {
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        CliffordTableau {
            x_images: (0..n).map(|q| PauliString::single(n, q, Pauli::X)).collect(),
            z_images: (0..n).map(|q| PauliString::single(n, q, Pauli::Z)).collect(),
        }
    }

    /// Builds a tableau from generator images, checking the symplectic conditions.
    pub fn from_images(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Result<Self> {
        let t = CliffordTableau { x_images, z_images };
        t.validate()?;
        Ok(t)
    }

    /// Tableau of the gate sequence applied in order.
    pub fn from_gates(n: usize, gates: &[CliffordGate]) -> Result<Self> {
        let mut t = Self::identity(n);
        for g in gates {
            t.apply(g)?;
        }
        Ok(t)
    }

    pub fn num_qubits(&self) -> usize {
        self.x_images.len()
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.num_qubits())
    }

    /// Appends `g` after the Clifford this tableau represents.
    pub fn apply(&mut self, g: &CliffordGate) -> Result<()> {
        let n = self.num_qubits();
        if let Some(&q) = g.qubits().iter().find(|&&q| q >= n) {
            return Err(QdcError::QubitOutOfRange(q, n));
        }
        let qs = g.qubits();
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(QdcError::InvalidCircuit(format!("identical qubits in {g}")));
        }
        for p in self.x_images.iter_mut().chain(self.z_images.iter_mut()) {
            g.conjugate_in_place(p);
        }
        Ok(())
    }

    /// `C p C†`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        let n = self.num_qubits();
        if p.num_qubits() != n {
            return Err(QdcError::LengthMismatch(n, p.num_qubits()));
        }
        let ys = (0..n).filter(|&q| p.x(q) && p.z(q)).count();
        let mut acc = PauliString::identity(n).with_phase(((p.phase() as usize + ys) % 4) as u8);
        for q in 0..n {
            if p.x(q) {
                acc = acc.multiply(&self.x_images[q])?;
            }
            if p.z(q) {
                acc = acc.multiply(&self.z_images[q])?;
            }
        }
        Ok(acc)
    }

    /// Conjugates a rotation, folding a sign into the angle.
    pub fn conjugate_rotation(&self, r: &PauliRotation) -> Result<PauliRotation> {
        let img = self.conjugate(r.pauli())?;
        PauliRotation::new(img, r.angle())
    }

    /// Tableau of `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &CliffordTableau) -> Result<CliffordTableau> {
        if self.num_qubits() != other.num_qubits() {
            return Err(QdcError::LengthMismatch(self.num_qubits(), other.num_qubits()));
        }
        let x_images = other
            .x_images
            .iter()
            .map(|p| self.conjugate(p))
            .collect::<Result<Vec<_>>>()?;
        let z_images = other
            .z_images
            .iter()
            .map(|p| self.conjugate(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(CliffordTableau { x_images, z_images })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CliffordTableau) -> Result<CliffordTableau> {
        next.compose(self)
    }

    pub fn inverse(&self) -> CliffordTableau {
        let n = self.num_qubits();
        let preimage = |g: &PauliString| -> PauliString {
            let mut q = PauliString::identity(n);
            for j in 0..n {
                let xb = !g.commutes(&self.z_images[j]).expect("width checked");
                let zb = !g.commutes(&self.x_images[j]).expect("width checked");
                q.set_bits(j, xb, zb);
            }
            let img = self.conjugate(&q).expect("width checked");
            debug_assert_eq!(img.unsigned(), g.unsigned());
            q.with_phase(img.phase())
        };
        let x_images = (0..n)
            .map(|j| preimage(&PauliString::single(n, j, Pauli::X)))
            .collect();
        let z_images = (0..n)
            .map(|j| preimage(&PauliString::single(n, j, Pauli::Z)))
            .collect();
        CliffordTableau { x_images, z_images }
    }

    fn validate(&self) -> Result<()> {
        let n = self.x_images.len();
        if self.z_images.len() != n {
            return Err(QdcError::LengthMismatch(n, self.z_images.len()));
        }
        for p in self.x_images.iter().chain(&self.z_images) {
            if p.num_qubits() != n {
                return Err(QdcError::LengthMismatch(n, p.num_qubits()));
            }
            if !p.is_hermitian() {
                return Err(QdcError::NonHermitian(p.to_string()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let xx = self.x_images[i].commutes(&self.x_images[j])?;
                let zz = self.z_images[i].commutes(&self.z_images[j])?;
                let xz = self.x_images[i].commutes(&self.z_images[j])?;
                if !xx || !zz || xz == (i == j) {
                    return Err(QdcError::InvalidCircuit(
                        "generator images violate the symplectic conditions".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CliffordTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CliffordTableau(n={})", self.num_qubits())?;
        for (q, (x, z)) in self.x_images.iter().zip(&self.z_images).enumerate() {
            writeln!(f, "  X{q} -> {x}, Z{q} -> {z}")?;
        }
        Ok(())
    }
}
