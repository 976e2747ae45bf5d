//! Exact logical-level simulation of the |−⟩-proxy protocols and the
//! exhaustive enumeration over injected resource-error patterns.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::spec::{ProtocolKind, ProtocolSpec};
use crate::pauli::{Basis, CliffordGate, StabilizerTableau};
use crate::scalar::{complement, Scalar};

/// Outcome of one logical-level shot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotRecord {
    /// Resource readouts `n_j`, indexed by resource.
    pub n_bits: Vec<bool>,
    /// Data readouts `m_j` for data qubits `1..num_data`.
    pub m_bits: Vec<bool>,
    pub accepted: bool,
    pub frame_offset: bool,
    pub output_error: bool,
}

#[derive(Clone, Debug)]
struct RawReadout {
    n_bits: Vec<bool>,
    m_bits: Vec<bool>,
    output: bool,
}

/// Tableau-backed logical simulator with cached noiseless reference parities.
#[derive(Clone, Debug)]
pub struct LogicalSimulator {
    spec: ProtocolSpec,
    check_reference: Vec<bool>,
    output_reference: bool,
}

impl LogicalSimulator {
    pub fn new(spec: &ProtocolSpec) -> Self {
        let mut sim = Self {
            spec: spec.clone(),
            check_reference: Vec::new(),
            output_reference: false,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let raw = sim.execute(0, &mut rng);
        sim.check_reference = sim.check_parities(&raw);
        sim.output_reference = sim.output_parity(&raw);
        sim
    }

    pub fn spec(&self) -> &ProtocolSpec {
        &self.spec
    }

    pub fn reference_checks(&self) -> &[bool] {
        &self.check_reference
    }

    /// Tableau state after the encoding CNOT network (data qubits only).
    pub fn encoded_state(spec: &ProtocolSpec) -> StabilizerTableau {
        let mut t = StabilizerTableau::new(spec.num_data);
        for q in spec.plus_qubits() {
            t.apply(&CliffordGate::h(q)).expect("in range");
        }
        for (c, tg) in spec.cnots() {
            t.apply(&CliffordGate::cnot(c, tg)).expect("in range");
        }
        t
    }

    fn execute<R: Rng + ?Sized>(&self, pattern: u64, rng: &mut R) -> RawReadout {
        let s = &self.spec;
        let k = s.num_resources();
        let res = |r: usize| s.num_data + r;
        let mut t = StabilizerTableau::new(s.num_data + k);
        let apply = |t: &mut StabilizerTableau, g: CliffordGate| t.apply(&g).expect("in range");
        for q in s.plus_qubits() {
            apply(&mut t, CliffordGate::h(q));
        }
        for (c, tg) in s.cnots() {
            apply(&mut t, CliffordGate::cnot(c, tg));
        }
        for r in 0..k {
            // |−⟩ resource; an injected Z turns it into |+⟩
            apply(&mut t, CliffordGate::x(res(r)));
            apply(&mut t, CliffordGate::h(res(r)));
            if (pattern >> r) & 1 == 1 {
                apply(&mut t, CliffordGate::z(res(r)));
            }
        }
        for &(j, r) in &s.consumption {
            apply(&mut t, CliffordGate::cnot(j, res(r)));
        }
        let mut measure = |q: usize| t.measure(q, Basis::X, rng).expect("in range").bit;
        let n_bits: Vec<bool> = (0..k).map(|r| measure(res(r))).collect();
        let m_bits: Vec<bool> = (1..s.num_data).map(&mut measure).collect();
        let output = measure(0);
        RawReadout {
            n_bits,
            m_bits,
            output,
        }
    }

    fn check_parities(&self, raw: &RawReadout) -> Vec<bool> {
        self.spec
            .checks
            .iter()
            .map(|c| c.iter().fold(false, |a, &j| a ^ raw.m_bits[j - 1]))
            .collect()
    }

    fn output_parity(&self, raw: &RawReadout) -> bool {
        self.spec
            .output_support
            .iter()
            .fold(raw.output, |a, &j| a ^ raw.m_bits[j - 1])
    }

    /// Simulate one shot with Z errors injected on the resources in `pattern`.
    pub fn run_shot<R: Rng + ?Sized>(&self, pattern: u64, rng: &mut R) -> ShotRecord {
        let raw = self.execute(pattern, rng);
        let accepted = self
            .check_parities(&raw)
            .iter()
            .zip(&self.check_reference)
            .all(|(a, b)| a == b);
        let output_error = self.output_parity(&raw) != self.output_reference;
        let frame_offset = self.spec.frame_rule.offset(&raw.n_bits, &raw.m_bits);
        ShotRecord {
            n_bits: raw.n_bits,
            m_bits: raw.m_bits,
            accepted,
            frame_offset,
            output_error,
        }
    }
}

/// One-off shot; prefer [`LogicalSimulator`] when running many.
pub fn run_logical_shot<R: Rng + ?Sized>(
    spec: &ProtocolSpec,
    pattern: u64,
    rng: &mut R,
) -> ShotRecord {
    LogicalSimulator::new(spec).run_shot(pattern, rng)
}

/// Pattern counts by Hamming weight: `Σ_w c_w p^w (1-p)^(k-w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightEnumerator {
    pub counts: Vec<u64>,
}

impl WeightEnumerator {
    pub fn new(num_resources: usize) -> Self {
        Self {
            counts: vec![0; num_resources + 1],
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn eval<T: Scalar>(&self, p: &T) -> T {
        let k = (self.counts.len() - 1) as u32;
        let q = complement(p);
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .fold(T::zero(), |acc, (w, &c)| {
                acc + T::from_count(c) * p.powu(w as u32) * q.powu(k - w as u32)
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleEntry {
    pub pattern: u64,
    pub accepted: bool,
    pub output_error: bool,
}

/// Exhaustive table over all `2^k` resource-error patterns.
#[derive(Clone, Debug)]
pub struct OracleTable {
    pub kind: ProtocolKind,
    pub num_resources: usize,
    pub entries: Vec<OracleEntry>,
    pub accepted: WeightEnumerator,
    pub accepted_errors: WeightEnumerator,
}

impl OracleTable {
    pub fn entry(&self, pattern: u64) -> OracleEntry {
        self.entries[pattern as usize]
    }

    pub fn p_accept<T: Scalar>(&self, p: &T) -> T {
        self.accepted.eval(p)
    }

    pub fn p_error_and_accept<T: Scalar>(&self, p: &T) -> T {
        self.accepted_errors.eval(p)
    }

    pub fn p_out<T: Scalar>(&self, p: &T) -> T {
        self.p_error_and_accept(p) / self.p_accept(p)
    }

    pub fn discard_ratio<T: Scalar>(&self, p: &T) -> T {
        T::one() - self.p_accept(p)
    }
}

pub fn exhaustive_oracle(spec: &ProtocolSpec) -> OracleTable {
    let k = spec.num_resources();
    assert!(k <= 20, "exhaustive enumeration limited to 20 resources");
    let sim = LogicalSimulator::new(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut accepted = WeightEnumerator::new(k);
    let mut accepted_errors = WeightEnumerator::new(k);
    let entries = (0..1u64 << k)
        .map(|pattern| {
            let shot = sim.run_shot(pattern, &mut rng);
            let w = pattern.count_ones() as usize;
            if shot.accepted {
                accepted.counts[w] += 1;
                if shot.output_error {
                    accepted_errors.counts[w] += 1;
                }
            }
            OracleEntry {
                pattern,
                accepted: shot.accepted,
                output_error: shot.output_error,
            }
        })
        .collect();
    OracleTable {
        kind: spec.kind,
        num_resources: k,
        entries,
        accepted,
        accepted_errors,
    }
}

/// Discard probability `1 - P(accept)` from the exhaustive table.
pub fn discard_ratio<T: Scalar>(table: &OracleTable, p: &T) -> T {
    table.discard_ratio(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::spec::build_protocol;

    #[test]
    fn noiseless_shot_is_accepted_without_error() {
        let spec = build_protocol(ProtocolKind::SevenToOne);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shot = run_logical_shot(&spec, 0, &mut rng);
        assert!(shot.accepted);
        assert!(!shot.output_error);
        assert_eq!(shot.n_bits.len(), 7);
        assert_eq!(shot.m_bits.len(), 7);
    }

    #[test]
    fn single_resource_error_is_rejected() {
        let spec = build_protocol(ProtocolKind::SevenToOne);
        let sim = LogicalSimulator::new(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        // resource 2 feeds data qubit 3, which sits in checks {1,3,5,7} and {2,3,6,7}
        let clean = sim.run_shot(0, &mut rng);
        assert!(clean.accepted);
        let shot = sim.run_shot(1 << 2, &mut rng);
        assert!(!shot.accepted);
    }

    #[test]
    fn weight_three_patterns() {
        let spec = build_protocol(ProtocolKind::SevenToOne);
        let sim = LogicalSimulator::new(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        // data {1,2,3}: 1 xor 2 = 3, a codeword of the Hamming code
        let line = sim.run_shot(0b111, &mut rng);
        assert!(line.accepted && line.output_error);
        // data {1,2,4} is not
        let other = sim.run_shot(0b1011, &mut rng);
        assert!(!other.accepted);
    }

    #[test]
    fn frame_offset_uses_actual_readouts() {
        let spec = build_protocol(ProtocolKind::SevenToOne);
        let sim = LogicalSimulator::new(&spec);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut seen = [false; 2];
        for _ in 0..64 {
            let s = sim.run_shot(0, &mut rng);
            assert_eq!(s.frame_offset, spec.frame_rule.offset(&s.n_bits, &s.m_bits));
            seen[s.frame_offset as usize] = true;
        }
        // the offset is a uniformly random gauge bit in the proxy
        assert!(seen[0] && seen[1]);
    }
}
