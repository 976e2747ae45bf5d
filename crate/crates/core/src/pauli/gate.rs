use std::fmt;

use super::string::PauliString;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    S,
    X,
    Z,
    Cnot,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::Cnot => "CX",
        }
    }
}

/// A validated Clifford gate. `Cnot` targets are `[control, target]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CliffordGate {
    kind: GateKind,
    targets: [usize; 2],
}

impl CliffordGate {
    pub fn new(kind: GateKind, targets: &[usize]) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} target(s), got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            )));
        }
        if kind == GateKind::Cnot && targets[0] == targets[1] {
            return Err(Error::InvalidGate(format!(
                "CX control and target coincide on qubit {}",
                targets[0]
            )));
        }
        let second = if targets.len() == 2 {
            targets[1]
        } else {
            targets[0]
        };
        Ok(Self {
            kind,
            targets: [targets[0], second],
        })
    }

    pub fn h(q: usize) -> Self {
        Self {
            kind: GateKind::H,
            targets: [q, q],
        }
    }

    pub fn s(q: usize) -> Self {
        Self {
            kind: GateKind::S,
            targets: [q, q],
        }
    }

    pub fn x(q: usize) -> Self {
        Self {
            kind: GateKind::X,
            targets: [q, q],
        }
    }

    pub fn z(q: usize) -> Self {
        Self {
            kind: GateKind::Z,
            targets: [q, q],
        }
    }

    /// Panics if `control == target`; use [`CliffordGate::new`] for checked input.
    pub fn cnot(control: usize, target: usize) -> Self {
        assert_ne!(control, target, "CX control and target must differ");
        Self {
            kind: GateKind::Cnot,
            targets: [control, target],
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets[..self.kind.arity()]
    }

    pub fn max_qubit(&self) -> usize {
        self.targets[0].max(self.targets[1])
    }
}

impl fmt::Debug for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.kind.name(), self.targets())
    }
}

/// Heisenberg-picture update `p <- g p g†`.
pub fn conjugate(gate: &CliffordGate, p: &PauliString) -> Result<PauliString> {
    let n = p.num_qubits();
    if gate.max_qubit() >= n {
        return Err(Error::QubitOutOfRange {
            index: gate.max_qubit(),
            num_qubits: n,
        });
    }
    let mut out = p.clone();
    conjugate_in_place(gate, &mut out);
    Ok(out)
}

pub(crate) fn conjugate_in_place(gate: &CliffordGate, p: &mut PauliString) {
    let a = gate.targets[0];
    let xa = p.x_bits().get(a);
    let za = p.z_bits().get(a);
    match gate.kind {
        GateKind::H => {
            if xa && za {
                p.add_phase(2);
            }
            p.x_bits_mut().set(a, za);
            p.z_bits_mut().set(a, xa);
        }
        GateKind::S => {
            if xa && za {
                p.add_phase(2);
            }
            p.z_bits_mut().set(a, za ^ xa);
        }
        GateKind::X => {
            if za {
                p.add_phase(2);
            }
        }
        GateKind::Z => {
            if xa {
                p.add_phase(2);
            }
        }
        GateKind::Cnot => {
            let b = gate.targets[1];
            let xb = p.x_bits().get(b);
            let zb = p.z_bits().get(b);
            if xa && zb && (xb == za) {
                p.add_phase(2);
            }
            p.x_bits_mut().set(b, xb ^ xa);
            p.z_bits_mut().set(a, za ^ zb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn cnot_rules() {
        let g = CliffordGate::cnot(0, 1);
        assert_eq!(conjugate(&g, &p("XI")).unwrap(), p("XX"));
        assert_eq!(conjugate(&g, &p("IX")).unwrap(), p("IX"));
        assert_eq!(conjugate(&g, &p("IZ")).unwrap(), p("ZZ"));
        assert_eq!(conjugate(&g, &p("ZI")).unwrap(), p("ZI"));
        // Y⊗Y -> -X⊗Z under CNOT
        assert_eq!(conjugate(&g, &p("YY")).unwrap(), p("-XZ"));
    }

    #[test]
    fn single_qubit_rules() {
        assert_eq!(conjugate(&CliffordGate::h(0), &p("X")).unwrap(), p("Z"));
        assert_eq!(conjugate(&CliffordGate::h(0), &p("Y")).unwrap(), p("-Y"));
        assert_eq!(conjugate(&CliffordGate::s(0), &p("X")).unwrap(), p("Y"));
        assert_eq!(conjugate(&CliffordGate::s(0), &p("Y")).unwrap(), p("-X"));
        assert_eq!(conjugate(&CliffordGate::x(0), &p("Z")).unwrap(), p("-Z"));
        assert_eq!(conjugate(&CliffordGate::z(0), &p("X")).unwrap(), p("-X"));
    }

    #[test]
    fn invalid_gates_rejected() {
        assert!(CliffordGate::new(GateKind::Cnot, &[1, 1]).is_err());
        assert!(CliffordGate::new(GateKind::H, &[0, 1]).is_err());
        assert!(conjugate(&CliffordGate::h(3), &p("XX")).is_err());
    }
}
