//! Quantum depth compression: rewrite circuits into non-Clifford Pauli phasors
//! followed by one Clifford section, then reduce both to constant-depth,
//! grid-local dynamic circuits.

pub mod bench;
pub mod circuit;
pub mod error;
pub mod frame;
pub mod passes;
pub mod pauli;
pub mod reduce;
pub mod sim;
pub mod synth;
pub mod tableau;

pub use circuit::{check_layout, Circuit, GridLayout, Instruction, Metrics};
pub use error::{QdcError, Result};
pub use frame::{ParityExpr, PauliFrame};
pub use pauli::{Pauli, PauliRotation, PauliString};
pub use tableau::{CliffordGate, CliffordTableau};
