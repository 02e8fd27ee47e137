//! Pauli strings and Pauli rotations.

use std::fmt;
use std::str::FromStr;

use crate::error::{QdcError, Result};

/// Angle tolerance used to decide whether a rotation is Clifford.
pub const ANGLE_EPS: f64 = 1e-9;

/// Single-qubit Pauli operator. `Y` is the Hermitian `iXZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// Exponent of `i` picked up when multiplying single-qubit Paulis `(x1,z1)·(x2,z2)`.
fn product_phase(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
    let (x2i, z2i) = (x2 as i32, z2 as i32);
    match (x1, z1) {
        (false, false) => 0,
        (true, true) => z2i - x2i,
        (true, false) => z2i * (2 * x2i - 1),
        (false, true) => x2i * (1 - 2 * z2i),
    }
}

/// An `n`-qubit Pauli operator `i^phase · P_0 ⊗ … ⊗ P_{n-1}`.
///
/// Character `k` of the text form is qubit `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    x: Vec<bool>,
    z: Vec<bool>,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            x: vec![false; n],
            z: vec![false; n],
            phase: 0,
        }
    }

    pub fn from_bits(x: Vec<bool>, z: Vec<bool>, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(QdcError::LengthMismatch(x.len(), z.len()));
        }
        Ok(PauliString { x, z, phase: phase % 4 })
    }

    /// A single Pauli on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.set(q, p);
        s
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Self {
        let mut s = Self::identity(paulis.len());
        for (q, &p) in paulis.iter().enumerate() {
            s.set(q, p);
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn x(&self, q: usize) -> bool {
        self.x[q]
    }

    pub fn z(&self, q: usize) -> bool {
        self.z[q]
    }

    /// Power of `i` in front of the tensor product.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    pub fn set_phase(&mut self, phase: u8) {
        self.phase = phase % 4;
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x[q], self.z[q])
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        let (x, z) = p.bits();
        self.x[q] = x;
        self.z[q] = z;
    }

    pub fn set_bits(&mut self, q: usize, x: bool, z: bool) {
        self.x[q] = x;
        self.z[q] = z;
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(x, z)| **x || **z).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits())
            .filter(|&q| self.x[q] || self.z[q])
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.weight() == 0
    }

    /// `true` for phases `±1`, i.e. the operator is Hermitian.
    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    /// `true` when the phase is `-1`.
    pub fn is_negative(&self) -> bool {
        self.phase == 2
    }

    /// Same Pauli letters with the phase reset to `+1`.
    pub fn unsigned(&self) -> Self {
        PauliString {
            x: self.x.clone(),
            z: self.z.clone(),
            phase: 0,
        }
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut phase = self.phase as i32 + other.phase as i32;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.z.len());
        for q in 0..self.x.len() {
            phase += product_phase(self.x[q], self.z[q], other.x[q], other.z[q]);
            x.push(self.x[q] ^ other.x[q]);
            z.push(self.z[q] ^ other.z[q]);
        }
        Ok(PauliString {
            x,
            z,
            phase: phase.rem_euclid(4) as u8,
        })
    }

    /// Symplectic inner product test.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        let mut parity = false;
        for q in 0..self.x.len() {
            parity ^= (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q]);
        }
        Ok(!parity)
    }

    /// Restriction to the listed qubits, in that order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        PauliString {
            x: qubits.iter().map(|&q| self.x[q]).collect(),
            z: qubits.iter().map(|&q| self.z[q]).collect(),
            phase: self.phase,
        }
    }

    /// Places this string on `qubits` of an `n`-qubit register.
    pub fn embed(&self, n: usize, qubits: &[usize]) -> Result<PauliString> {
        if qubits.len() != self.num_qubits() {
            return Err(QdcError::LengthMismatch(qubits.len(), self.num_qubits()));
        }
        let mut out = PauliString::identity(n);
        for (k, &q) in qubits.iter().enumerate() {
            if q >= n {
                return Err(QdcError::QubitOutOfRange(q, n));
            }
            out.x[q] = self.x[k];
            out.z[q] = self.z[k];
        }
        out.phase = self.phase;
        Ok(out)
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(QdcError::LengthMismatch(
                self.num_qubits(),
                other.num_qubits(),
            ));
        }
        Ok(())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.phase {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{sign}")?;
        for q in 0..self.num_qubits() {
            write!(f, "{}", self.get(q).to_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = QdcError;

    fn from_str(s: &str) -> Result<Self> {
        let (phase, body) = if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else {
            (0, s)
        };
        let paulis = body
            .chars()
            .map(|c| Pauli::from_char(c).ok_or_else(|| QdcError::Parse(format!("bad Pauli {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if paulis.is_empty() {
            return Err(QdcError::Parse(format!("empty Pauli string {s:?}")));
        }
        Ok(PauliString::from_paulis(&paulis).with_phase(phase))
    }
}

/// The rotation `exp(-i·angle/2·P)` for a Hermitian Pauli `P`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliRotation {
    pauli: PauliString,
    angle: f64,
}

impl PauliRotation {
    /// A negative sign on `pauli` is folded into the angle.
    pub fn new(pauli: PauliString, angle: f64) -> Result<Self> {
        if !pauli.is_hermitian() {
            return Err(QdcError::NonHermitian(pauli.to_string()));
        }
        let angle = if pauli.is_negative() { -angle } else { angle };
        Ok(PauliRotation {
            pauli: pauli.unsigned(),
            angle,
        })
    }

    /// `P^α` up to global phase, i.e. `angle = α·π`.
    pub fn from_exponent(pauli: PauliString, alpha: f64) -> Result<Self> {
        Self::new(pauli, alpha * std::f64::consts::PI)
    }

    pub fn pauli(&self) -> &PauliString {
        &self.pauli
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn num_qubits(&self) -> usize {
        self.pauli.num_qubits()
    }

    pub fn weight(&self) -> usize {
        self.pauli.weight()
    }

    pub fn is_clifford(&self) -> bool {
        clifford_quarter_turns(self.angle).is_some()
    }

    pub fn with_angle(&self, angle: f64) -> Self {
        PauliRotation {
            pauli: self.pauli.clone(),
            angle,
        }
    }
}

/// Angle normalised into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let a = angle.rem_euclid(two_pi);
    if two_pi - a < ANGLE_EPS {
        0.0
    } else {
        a
    }
}

/// `Some(k)` when `angle ≡ k·π/2 (mod 2π)` within [`ANGLE_EPS`].
pub fn clifford_quarter_turns(angle: f64) -> Option<u8> {
    let quarter = std::f64::consts::FRAC_PI_2;
    let a = normalize_angle(angle);
    let k = (a / quarter).round();
    if (a - k * quarter).abs() <= ANGLE_EPS {
        Some((k as i64).rem_euclid(4) as u8)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn products() {
        let xx = p("X").multiply(&p("X")).unwrap();
        assert_eq!(xx, p("I"));
        let xz = p("X").multiply(&p("Z")).unwrap();
        assert_eq!(xz, p("-iY"));
        assert_eq!(p("XI").multiply(&p("IZ")).unwrap(), p("XZ"));
        assert!(p("X").multiply(&p("XX")).is_err());
    }

    #[test]
    fn commutation() {
        assert!(!p("X").commutes(&p("Z")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("XYZ").commutes(&p("III")).unwrap());
    }

    #[test]
    fn text_round_trip() {
        for s in ["XIZ", "-XIZ", "+iY", "-iZZ"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("+XZ").to_string(), "XZ");
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("-".parse::<PauliString>().is_err());
    }

    #[test]
    fn weight_and_support() {
        assert_eq!(p("IXIY").weight(), 2);
        assert_eq!(p("IXIY").support(), vec![1, 3]);
        assert_eq!(p("III").weight(), 0);
    }

    #[test]
    fn clifford_angles() {
        use std::f64::consts::PI;
        assert_eq!(clifford_quarter_turns(PI / 2.0), Some(1));
        assert_eq!(clifford_quarter_turns(-PI / 2.0), Some(3));
        assert_eq!(clifford_quarter_turns(2.0 * PI - 1e-12), Some(0));
        assert_eq!(clifford_quarter_turns(0.3), None);
        let r = PauliRotation::new(p("-ZZ"), 0.4).unwrap();
        assert_eq!(r.angle(), -0.4);
        assert_eq!(r.pauli(), &p("ZZ"));
        assert!(PauliRotation::new(p("+iZ"), 0.1).is_err());
    }
}
