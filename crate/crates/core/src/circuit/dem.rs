//! Detector error model: every single-fault Pauli term of every noise
//! instruction, with the detectors, observables and checks it flips.

use std::collections::HashMap;

use super::ir::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::sim::frame::{parity_plane, propagate, FrameState};

/// Pauli codes use bit 0 for X and bit 1 for Z (so 3 is Y).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PauliTerm {
    Single { qubit: usize, pauli: u8 },
    Pair { a: usize, pa: u8, b: usize, pb: u8 },
    MeasurementFlip { measurement: usize },
    LogicalZ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FaultLocation {
    pub instruction: usize,
    pub term: PauliTerm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ErrorMechanism {
    pub id: usize,
    /// First contributing fault; merged faults share the signature.
    pub location: FaultLocation,
    /// Patch where the first contributing fault acts.
    pub home_patch: usize,
    pub detectors: Vec<usize>,
    pub observables: u64,
    pub checks: u64,
    /// Flips the frame-rule parity.
    pub frame: bool,
    pub probability: f64,
    pub merged_faults: usize,
    /// Decomposition of the first contributing fault into its X and Z
    /// parts; each part alone flips detectors of a single type.
    pub parts: Vec<MechanismPart>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MechanismPart {
    pub detectors: Vec<usize>,
    pub observables: u64,
    pub checks: u64,
    pub frame: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Signature {
    detectors: Vec<usize>,
    observables: u64,
    checks: u64,
    frame: bool,
}

impl Signature {
    fn xor(&self, other: &Signature) -> Signature {
        let mut detectors = Vec::with_capacity(self.detectors.len() + other.detectors.len());
        let (a, b) = (&self.detectors, &other.detectors);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i] < b[j]) {
                detectors.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j] < a[i] {
                detectors.push(b[j]);
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        Signature {
            detectors,
            observables: self.observables ^ other.observables,
            checks: self.checks ^ other.checks,
            frame: self.frame ^ other.frame,
        }
    }

    fn is_trivial(&self) -> bool {
        self.detectors.is_empty() && self.observables == 0 && self.checks == 0 && !self.frame
    }
}

#[derive(Clone, Copy)]
enum Component {
    X(usize),
    Z(usize),
    Flip(usize),
    LogicalZ,
}

fn components(circuit: &Circuit) -> Vec<(usize, Component)> {
    let mut out = Vec::new();
    let mut meas = 0;
    for (i, inst) in circuit.instructions().iter().enumerate() {
        match inst {
            Instruction::Depolarize1 { p, targets } if *p > 0.0 => {
                for &q in targets {
                    out.push((i, Component::X(q)));
                    out.push((i, Component::Z(q)));
                }
            }
            Instruction::Depolarize2 { p, pairs } if *p > 0.0 => {
                for &(a, b) in pairs {
                    for q in [a, b] {
                        out.push((i, Component::X(q)));
                        out.push((i, Component::Z(q)));
                    }
                }
            }
            Instruction::Measure { flip, targets, .. } => {
                if *flip > 0.0 {
                    out.extend((0..targets.len()).map(|k| (i, Component::Flip(meas + k))));
                }
                meas += targets.len();
            }
            Instruction::LogicalZError { p, .. } if *p > 0.0 => out.push((i, Component::LogicalZ)),
            _ => {}
        }
    }
    out
}

const PASS_WORDS: usize = 64;

fn component_signatures(circuit: &Circuit, comps: &[(usize, Component)]) -> Vec<Signature> {
    let lanes = PASS_WORDS * 64;
    let mut sigs = vec![Signature::default(); comps.len()];
    let mut state = FrameState::new(circuit.num_qubits(), circuit.num_measurements(), PASS_WORDS);
    let mut buf = vec![0u64; PASS_WORDS];
    for (pass, batch) in comps.chunks(lanes).enumerate() {
        state.clear();
        let mut cursor = 0;
        propagate::<rand_chacha::ChaCha8Rng, _>(circuit, &mut state, None, |i, inst, _, st| {
            while cursor < batch.len() && batch[cursor].0 == i {
                let (w, b) = (cursor / 64, 1u64 << (cursor % 64));
                match batch[cursor].1 {
                    Component::X(q) => st.flip_x(q, w, b),
                    Component::Z(q) => st.flip_z(q, w, b),
                    Component::Flip(m) => st.flip_meas(m, w, b),
                    Component::LogicalZ => {
                        if let Instruction::LogicalZError { targets, .. } = inst {
                            targets.iter().for_each(|&q| st.flip_z(q, w, b));
                        }
                    }
                }
                cursor += 1;
            }
        });
        debug_assert_eq!(cursor, batch.len());
        let base = pass * lanes;
        let mut scatter = |set: &[usize], mut on_hit: Box<dyn FnMut(&mut Signature) + '_>| {
            parity_plane(&state, set, &mut buf);
            for (w, &word) in buf.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let lane = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if lane < batch.len() {
                        on_hit(&mut sigs[base + lane]);
                    }
                }
            }
        };
        for (d, det) in circuit.detectors().iter().enumerate() {
            scatter(&det.meas, Box::new(move |s| s.detectors.push(d)));
        }
        for (k, obs) in circuit.observables().iter().enumerate() {
            scatter(obs, Box::new(move |s| s.observables ^= 1 << k));
        }
        for (k, chk) in circuit.checks().iter().enumerate() {
            scatter(chk, Box::new(move |s| s.checks ^= 1 << k));
        }
        if let Some(frame) = circuit.frame() {
            scatter(frame, Box::new(|s| s.frame ^= true));
        }
    }
    sigs
}

/// Enumerates all single-fault terms, propagates them and merges terms with
/// identical signatures (combined probability `q1 + q2 - 2 q1 q2`). Terms
/// that flip nothing are dropped.
pub fn enumerate_error_mechanisms(circuit: &Circuit) -> Result<Vec<ErrorMechanism>> {
    if circuit.observables().len() > 64 || circuit.checks().len() > 64 {
        return Err(Error::Config(
            "at most 64 observables and 64 checks are supported".into(),
        ));
    }
    let comps = components(circuit);
    let sigs = component_signatures(circuit, &comps);
    let measured = circuit.measured_qubits();
    let patch = |q: usize| circuit.patch_of_qubit(q).unwrap_or(0);

    let mut index: HashMap<Signature, usize> = HashMap::new();
    let mut mechanisms: Vec<ErrorMechanism> = Vec::new();
    let mut add = |instruction: usize, term: PauliTerm, parts: [Signature; 2], prob: f64| {
        let sig = parts[0].xor(&parts[1]);
        if sig.is_trivial() || prob <= 0.0 {
            return;
        }
        if let Some(&k) = index.get(&sig) {
            let m = &mut mechanisms[k];
            m.probability = m.probability + prob - 2.0 * m.probability * prob;
            m.merged_faults += 1;
            return;
        }
        let home_patch = match term {
            PauliTerm::Single { qubit, .. } => patch(qubit),
            PauliTerm::Pair { a, .. } => patch(a),
            PauliTerm::MeasurementFlip { measurement } => patch(measured[measurement]),
            PauliTerm::LogicalZ => match &circuit.instructions()[instruction] {
                Instruction::LogicalZError { targets, .. } => patch(targets[0]),
                _ => 0,
            },
        };
        index.insert(sig.clone(), mechanisms.len());
        mechanisms.push(ErrorMechanism {
            id: mechanisms.len(),
            location: FaultLocation { instruction, term },
            home_patch,
            detectors: sig.detectors,
            observables: sig.observables,
            checks: sig.checks,
            frame: sig.frame,
            probability: prob,
            merged_faults: 1,
            parts: parts
                .into_iter()
                .filter(|p| !p.is_trivial())
                .map(|p| MechanismPart {
                    detectors: p.detectors,
                    observables: p.observables,
                    checks: p.checks,
                    frame: p.frame,
                })
                .collect(),
        });
    };

    let mut k = 0;
    let mut meas = 0;
    for (i, inst) in circuit.instructions().iter().enumerate() {
        match inst {
            Instruction::Depolarize1 { p, targets } if *p > 0.0 => {
                for &q in targets {
                    let (x, z) = (&sigs[k], &sigs[k + 1]);
                    k += 2;
                    let none = Signature::default;
                    for (pauli, parts) in [
                        (1u8, [x.clone(), none()]),
                        (2, [none(), z.clone()]),
                        (3, [x.clone(), z.clone()]),
                    ] {
                        add(i, PauliTerm::Single { qubit: q, pauli }, parts, p / 3.0);
                    }
                }
            }
            Instruction::Depolarize2 { p, pairs } if *p > 0.0 => {
                for &(a, b) in pairs {
                    let c = &sigs[k..k + 4];
                    k += 4;
                    for code in 1..16u8 {
                        let (pa, pb) = (code & 3, code >> 2);
                        let pick = |on: u8, comp: &Signature| {
                            if on != 0 {
                                comp.clone()
                            } else {
                                Signature::default()
                            }
                        };
                        let x = pick(pa & 1, &c[0]).xor(&pick(pb & 1, &c[2]));
                        let z = pick(pa & 2, &c[1]).xor(&pick(pb & 2, &c[3]));
                        add(i, PauliTerm::Pair { a, pa, b, pb }, [x, z], p / 15.0);
                    }
                }
            }
            Instruction::Measure { flip, targets, .. } => {
                if *flip > 0.0 {
                    for j in 0..targets.len() {
                        let sig = sigs[k].clone();
                        k += 1;
                        let term = PauliTerm::MeasurementFlip {
                            measurement: meas + j,
                        };
                        add(i, term, [sig, Signature::default()], *flip);
                    }
                }
                meas += targets.len();
            }
            Instruction::LogicalZError { p, .. } if *p > 0.0 => {
                let sig = sigs[k].clone();
                k += 1;
                add(i, PauliTerm::LogicalZ, [Signature::default(), sig], *p);
            }
            _ => {}
        }
    }
    debug_assert_eq!(k, sigs.len());
    Ok(mechanisms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_memory_circuit, NoiseModel};

    #[test]
    fn noiseless_circuit_has_no_mechanisms() {
        let c = build_memory_circuit(3, 3, NoiseModel::noiseless()).unwrap();
        assert!(enumerate_error_mechanisms(&c).unwrap().is_empty());
    }

    #[test]
    fn measurement_flip_hits_one_or_two_detectors() {
        let c = build_memory_circuit(3, 3, NoiseModel::new(0.001, 0.0).unwrap()).unwrap();
        let mechs = enumerate_error_mechanisms(&c).unwrap();
        // ancilla readouts of the middle round
        for m in 8..16 {
            let hit: Vec<usize> = (0..c.detectors().len())
                .filter(|&d| c.detectors()[d].meas.contains(&m))
                .collect();
            assert!((1..=2).contains(&hit.len()));
            assert!(mechs
                .iter()
                .any(|mech| mech.detectors == hit && mech.observables == 0));
        }
    }

    #[test]
    fn memory_mechanism_parts_are_graphlike() {
        let c = build_memory_circuit(5, 3, NoiseModel::new(0.001, 0.0).unwrap()).unwrap();
        for m in enumerate_error_mechanisms(&c).unwrap() {
            assert!(m.parts.iter().all(|p| p.detectors.len() <= 2), "{m:?}");
            assert!(m.detectors.len() <= 4);
            assert!(m.probability > 0.0 && m.probability < 0.01);
        }
    }
}
