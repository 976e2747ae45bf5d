//! Noiseless tableau execution of a circuit, used to validate detector and
//! observable construction independently of the frame simulator.

use rand::Rng;

use crate::circuit::{Circuit, Instruction};
use crate::error::Result;
use crate::pauli::{CliffordGate, StabilizerTableau};

/// Absolute measurement outcomes of one noiseless run; random outcomes are
/// drawn from `rng`. Noise instructions are ignored.
pub fn reference_measurements<R: Rng + ?Sized>(
    circuit: &Circuit,
    rng: &mut R,
) -> Result<Vec<bool>> {
    let mut t = StabilizerTableau::new(circuit.num_qubits());
    let mut out = Vec::with_capacity(circuit.num_measurements());
    for inst in circuit.instructions() {
        match inst {
            Instruction::Reset { basis, targets } => {
                for &q in targets {
                    t.reset(q, *basis, rng)?;
                }
            }
            Instruction::Gate { kind, targets } => {
                for &q in targets {
                    t.apply(&CliffordGate::new(*kind, &[q])?)?;
                }
            }
            Instruction::Cx { pairs } => {
                for &(c, tg) in pairs {
                    t.apply(&CliffordGate::cnot(c, tg))?;
                }
            }
            Instruction::Measure { basis, targets, .. } => {
                for &q in targets {
                    out.push(t.measure(q, *basis, rng)?.bit);
                }
            }
            _ => {}
        }
    }
    Ok(out)
}

pub fn parity(bits: &[bool], meas: &[usize]) -> bool {
    meas.iter().fold(false, |a, &m| a ^ bits[m])
}
