//! Seeded random Pauli-phasor circuits.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Instruction};
use crate::error::{QdcError, Result};
use crate::passes::rotation_instruction;
use crate::pauli::{Pauli, PauliRotation, PauliString};

/// Pauli weight of generated phasors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    /// Exactly this many non-identity factors.
    Fixed(usize),
    /// Uniform over `{I,X,Y,Z}^n`.
    Random(RandomTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomTag {
    Random,
}

impl WeightSpec {
    pub const RANDOM: WeightSpec = WeightSpec::Random(RandomTag::Random);
}

impl std::fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightSpec::Fixed(k) => write!(f, "{k}"),
            WeightSpec::Random(_) => write!(f, "random"),
        }
    }
}

impl std::str::FromStr for WeightSpec {
    type Err = QdcError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "random" {
            return Ok(WeightSpec::RANDOM);
        }
        s.parse()
            .map(WeightSpec::Fixed)
            .map_err(|_| QdcError::Parse(format!("weight must be an integer or \"random\", got {s:?}")))
    }
}

/// Parameters of one random instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub n_qubits: usize,
    pub n_phasors: usize,
    pub clifford_pct: f64,
    pub weight: WeightSpec,
    pub seed: u64,
}

const CLIFFORD_EXPONENTS: [f64; 4] = [0.0, 0.5, 1.0, 1.5];

/// Number of phasors given a Clifford exponent: `⌈pct·N/100⌉`.
pub fn clifford_count(pct: f64, n_phasors: usize) -> usize {
    let raw = pct * n_phasors as f64 / 100.0;
    // Guard against 0.1·30/100-style rounding noise before taking the ceiling.
    ((raw - 1e-9).ceil().max(0.0) as usize).min(n_phasors)
}

fn random_pauli(n: usize, weight: WeightSpec, rng: &mut ChaCha8Rng) -> PauliString {
    const XYZ: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
    const IXYZ: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    match weight {
        WeightSpec::Random(_) => {
            let ps: Vec<Pauli> = (0..n).map(|_| IXYZ[rng.gen_range(0..4)]).collect();
            PauliString::from_paulis(&ps)
        }
        WeightSpec::Fixed(k) => {
            let mut ps = vec![Pauli::I; n];
            for q in sample(rng, n, k) {
                ps[q] = XYZ[rng.gen_range(0..3)];
            }
            PauliString::from_paulis(&ps)
        }
    }
}

/// Random phasor list; deterministic in `spec.seed`.
pub fn random_phasor_circuit(spec: &GenSpec) -> Result<Vec<PauliRotation>> {
    if let WeightSpec::Fixed(k) = spec.weight {
        if k > spec.n_qubits {
            return Err(QdcError::Config(format!("weight {k} exceeds {} qubits", spec.n_qubits)));
        }
    }
    if !(0.0..=100.0).contains(&spec.clifford_pct) {
        return Err(QdcError::Config(format!("clifford_pct {} outside [0, 100]", spec.clifford_pct)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let k = clifford_count(spec.clifford_pct, spec.n_phasors);
    let mut is_clifford = vec![false; spec.n_phasors];
    for i in sample(&mut rng, spec.n_phasors, k) {
        is_clifford[i] = true;
    }
    is_clifford
        .into_iter()
        .map(|cliff| {
            let p = random_pauli(spec.n_qubits, spec.weight, &mut rng);
            if cliff {
                return PauliRotation::from_exponent(p, CLIFFORD_EXPONENTS[rng.gen_range(0..4)]);
            }
            loop {
                let r = PauliRotation::from_exponent(p.clone(), rng.gen_range(0.0..2.0))?;
                if !r.is_clifford() {
                    return Ok(r);
                }
            }
        })
        .collect()
}

/// Static circuit of the phasors. An identity phasor is kept as a global-phase
/// rotation written on qubit 0.
pub fn phasor_circuit(n: usize, phasors: &[PauliRotation]) -> Result<Circuit> {
    let mut c = Circuit::new(n, 0);
    for r in phasors {
        if r.pauli().num_qubits() != n {
            return Err(QdcError::LengthMismatch(r.pauli().num_qubits(), n));
        }
        if r.pauli().is_identity() {
            let id = PauliRotation::new(PauliString::identity(1), r.angle())?;
            c.push(Instruction::PauliRot { rotation: id, qubits: vec![0] })?;
        } else {
            c.push(rotation_instruction(r))?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::serialize;

    fn spec(pct: f64, weight: WeightSpec, seed: u64) -> GenSpec {
        GenSpec { n_qubits: 5, n_phasors: 30, clifford_pct: pct, weight, seed }
    }

    #[test]
    fn clifford_fraction() {
        let all = random_phasor_circuit(&spec(100.0, WeightSpec::RANDOM, 1)).unwrap();
        assert!(all.iter().all(PauliRotation::is_clifford));
        let none = random_phasor_circuit(&spec(0.0, WeightSpec::RANDOM, 1)).unwrap();
        assert!(none.iter().all(|r| !r.is_clifford()));
        let some = random_phasor_circuit(&spec(10.0, WeightSpec::RANDOM, 1)).unwrap();
        assert_eq!(some.iter().filter(|r| r.is_clifford()).count(), 3);
        assert_eq!(clifford_count(50.0, 5), 3);
    }

    #[test]
    fn fixed_weight() {
        let rs = random_phasor_circuit(&spec(0.0, WeightSpec::Fixed(3), 2)).unwrap();
        assert!(rs.iter().all(|r| r.weight() == 3));
        assert!(random_phasor_circuit(&spec(0.0, WeightSpec::Fixed(6), 2)).is_err());
    }

    #[test]
    fn deterministic_text() {
        let text = |seed| {
            let rs = random_phasor_circuit(&spec(40.0, WeightSpec::RANDOM, seed)).unwrap();
            serialize(&phasor_circuit(5, &rs).unwrap())
        };
        assert_eq!(text(9), text(9));
        assert_ne!(text(9), text(10));
    }

    #[test]
    fn weight_spec_parsing() {
        assert_eq!("random".parse::<WeightSpec>().unwrap(), WeightSpec::RANDOM);
        assert_eq!("4".parse::<WeightSpec>().unwrap(), WeightSpec::Fixed(4));
        assert!("four".parse::<WeightSpec>().is_err());
        let w: WeightSpec = serde_json::from_str("\"random\"").unwrap();
        assert_eq!(w, WeightSpec::RANDOM);
        let w: WeightSpec = serde_json::from_str("3").unwrap();
        assert_eq!(w, WeightSpec::Fixed(3));
    }
}
