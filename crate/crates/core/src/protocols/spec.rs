use serde::{Deserialize, Serialize};

use crate::pauli::Basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    SevenToOne,
    FifteenToOne,
}

impl ProtocolKind {
    pub fn label(self) -> &'static str {
        match self {
            ProtocolKind::SevenToOne => "7to1",
            ProtocolKind::FifteenToOne => "15to1",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "7to1" | "7-to-1" | "7" | "seven" | "seventoone" => Some(ProtocolKind::SevenToOne),
            "15to1" | "15-to-1" | "15" | "fifteen" | "fifteentoone" => {
                Some(ProtocolKind::FifteenToOne)
            }
            _ => None,
        }
    }
}

/// Rule deciding the Clifford frame bit of the output patch from the
/// resource readouts `n` and the data readouts `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameRule {
    /// Include every resource readout `n_j`.
    pub include_resources: bool,
    /// Data patches whose readouts `m_j` enter the parity.
    pub data: Vec<usize>,
    /// Report the offset when the parity is even (product of signs is `+1`).
    pub offset_on_even: bool,
}

impl FrameRule {
    pub fn parity(&self, n_bits: &[bool], m_bits: &[bool]) -> bool {
        let mut parity = false;
        if self.include_resources {
            parity ^= n_bits.iter().fold(false, |a, &b| a ^ b);
        }
        for &j in &self.data {
            parity ^= m_bits[j - 1];
        }
        parity
    }

    pub fn offset(&self, n_bits: &[bool], m_bits: &[bool]) -> bool {
        self.parity(n_bits, m_bits) != self.offset_on_even
    }
}

/// Logical circuit of one distillation protocol.
///
/// Qubit `0` is the output; `1..num_data` carry the code. Resource `r` is
/// consumed by data qubit `r + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolSpec {
    pub kind: ProtocolKind,
    pub num_data: usize,
    pub init_basis: Vec<Basis>,
    /// Barrier-separated CNOT groups; each group holds one or more parallel
    /// sub-layers of `(control, target)` pairs.
    pub cnot_layers: Vec<Vec<Vec<(usize, usize)>>>,
    /// `(data qubit, resource index)`; the data qubit is the control.
    pub consumption: Vec<(usize, usize)>,
    /// X-type parity checks over data qubits `1..num_data`.
    pub checks: Vec<Vec<usize>>,
    /// Data qubits whose X readouts are folded into the output observable.
    pub output_support: Vec<usize>,
    pub frame_rule: FrameRule,
}

impl ProtocolSpec {
    pub fn num_resources(&self) -> usize {
        self.consumption.len()
    }

    /// One syndrome-extraction barrier before the first CNOT group, one after
    /// each group and one after resource consumption.
    pub fn num_barriers(&self) -> usize {
        self.cnot_layers.len() + 2
    }

    pub fn cnot_count(&self) -> usize {
        self.cnot_layers.iter().flatten().map(Vec::len).sum()
    }

    /// CNOTs of the encoding network in time order.
    pub fn cnots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cnot_layers.iter().flatten().flatten().copied()
    }

    pub fn plus_qubits(&self) -> Vec<usize> {
        (0..self.num_data)
            .filter(|&q| self.init_basis[q] == Basis::X)
            .collect()
    }
}

fn init_basis(num_data: usize, plus: &[usize]) -> Vec<Basis> {
    (0..num_data)
        .map(|q| {
            if plus.contains(&q) {
                Basis::X
            } else {
                Basis::Z
            }
        })
        .collect()
}

/// Parity check `b`: data indices whose binary label has bit `b` set.
fn hamming_check(k: usize, bit: usize) -> Vec<usize> {
    (1..=k).filter(|j| (j >> bit) & 1 == 1).collect()
}

pub fn build_protocol(kind: ProtocolKind) -> ProtocolSpec {
    match kind {
        ProtocolKind::SevenToOne => ProtocolSpec {
            kind,
            num_data: 8,
            init_basis: init_basis(8, &[0, 1, 2, 4]),
            cnot_layers: vec![
                vec![vec![(1, 5), (2, 6)]],
                vec![vec![(0, 2), (4, 6)], vec![(1, 3), (5, 7)]],
                vec![vec![(0, 1), (2, 3), (4, 5), (6, 7)]],
            ],
            consumption: (1..=7).map(|j| (j, j - 1)).collect(),
            checks: (0..3).map(|b| hamming_check(7, b)).collect(),
            output_support: (1..=7).collect(),
            frame_rule: FrameRule {
                include_resources: true,
                data: (1..=7).collect(),
                offset_on_even: true,
            },
        },
        ProtocolKind::FifteenToOne => ProtocolSpec {
            kind,
            num_data: 16,
            init_basis: init_basis(16, &[0, 1, 2, 4, 8]),
            cnot_layers: vec![
                vec![vec![(1, 9), (2, 10), (4, 12)]],
                vec![vec![(0, 4), (1, 5), (2, 6), (8, 12), (9, 13), (10, 14)]],
                vec![
                    vec![(0, 2), (4, 6), (8, 10), (12, 14)],
                    vec![(1, 3), (5, 7), (9, 11), (13, 15)],
                ],
                vec![vec![
                    (0, 1),
                    (2, 3),
                    (4, 5),
                    (6, 7),
                    (8, 9),
                    (10, 11),
                    (12, 13),
                    (14, 15),
                ]],
            ],
            consumption: (1..=15).map(|j| (j, j - 1)).collect(),
            checks: (0..4).map(|b| hamming_check(15, b)).collect(),
            // a weight-7 face of the tetrahedron
            output_support: (1..=7).collect(),
            frame_rule: FrameRule {
                include_resources: false,
                data: (1..=7).collect(),
                offset_on_even: false,
            },
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_to_one_structure() {
        let s = build_protocol(ProtocolKind::SevenToOne);
        assert_eq!(s.cnot_count(), 10);
        assert_eq!(s.num_barriers(), 5);
        let sizes: Vec<usize> = s
            .cnot_layers
            .iter()
            .map(|g| g.iter().map(Vec::len).sum())
            .collect();
        assert_eq!(sizes, vec![2, 4, 4]);
        assert_eq!(s.cnot_layers[1].len(), 2);
        assert_eq!(s.plus_qubits(), vec![0, 1, 2, 4]);
        assert_eq!(s.consumption[0], (1, 0));
        assert_eq!(s.consumption[6], (7, 6));
        assert_eq!(
            s.checks,
            vec![vec![1, 3, 5, 7], vec![2, 3, 6, 7], vec![4, 5, 6, 7]]
        );
    }

    #[test]
    fn fifteen_to_one_structure() {
        let s = build_protocol(ProtocolKind::FifteenToOne);
        assert_eq!(s.cnot_count(), 25);
        assert_eq!(s.num_barriers(), 6);
        let sizes: Vec<usize> = s
            .cnot_layers
            .iter()
            .map(|g| g.iter().map(Vec::len).sum())
            .collect();
        assert_eq!(sizes, vec![3, 6, 8, 8]);
        assert_eq!(s.plus_qubits(), vec![0, 1, 2, 4, 8]);
        assert_eq!(s.num_resources(), 15);
        assert_eq!(s.checks[3], (8..=15).collect::<Vec<_>>());
        assert_eq!(s.checks[1], vec![2, 3, 6, 7, 10, 11, 14, 15]);
    }

    #[test]
    fn frame_rule_flips_with_any_single_readout() {
        let s = build_protocol(ProtocolKind::SevenToOne);
        let n = vec![false; 7];
        let m = vec![true, false, true, false, false, true, false];
        let base = s.frame_rule.offset(&n, &m);
        for j in 0..7 {
            let mut n2 = n.clone();
            n2[j] ^= true;
            assert_ne!(s.frame_rule.offset(&n2, &m), base);
            let mut m2 = m.clone();
            m2[j] ^= true;
            assert_ne!(s.frame_rule.offset(&n, &m2), base);
        }
        // even parity of n+m carries the Z offset
        assert!(s.frame_rule.offset(&n, &[false; 7]));
    }

    #[test]
    fn kind_labels_parse() {
        for k in [ProtocolKind::SevenToOne, ProtocolKind::FifteenToOne] {
            assert_eq!(ProtocolKind::parse(k.label()), Some(k));
        }
        assert_eq!(ProtocolKind::parse("bogus"), None);
    }
}
