//! Symplectic Pauli algebra, Clifford conjugation and the stabilizer-tableau
//! reference simulator.

mod bits;
mod gate;
mod string;
mod tableau;

pub use bits::BitVec;
pub use gate::{conjugate, CliffordGate, GateKind};
pub use string::PauliString;
pub use tableau::{Basis, MeasureOutcome, StabilizerTableau};

pub(crate) use bits::words_for;

/// Symplectic commutation test; errors on length mismatch.
pub fn commutes(a: &PauliString, b: &PauliString) -> crate::Result<bool> {
    a.commutes(b)
}

/// Operator product `a * b`.
pub fn multiply(a: &PauliString, b: &PauliString) -> crate::Result<PauliString> {
    a.multiply(b)
}
