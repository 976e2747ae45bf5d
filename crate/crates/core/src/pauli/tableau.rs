//! Aaronson–Gottesman stabilizer tableau.
//!
//! Rows `0..n` are destabilizers, rows `n..2n` stabilizers and row `2n` is
//! scratch space for deterministic measurements. Row `i` of the destabilizer
//! half anticommutes with row `i` of the stabilizer half.

use rand::Rng;

use super::bits::words_for;
use super::bits::BitVec;
use super::gate::{CliffordGate, GateKind};
use super::string::{product_phase_word, PauliString};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MeasureOutcome {
    pub bit: bool,
    pub deterministic: bool,
}

#[derive(Clone, Debug)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

impl StabilizerTableau {
    /// The all-`|0>` state.
    pub fn new(num_qubits: usize) -> Self {
        let words = words_for(num_qubits).max(1);
        let rows = 2 * num_qubits + 1;
        let mut t = Self {
            n: num_qubits,
            words,
            x: vec![0; rows * words],
            z: vec![0; rows * words],
            r: vec![false; rows],
        };
        for q in 0..num_qubits {
            t.x[q * words + (q >> 6)] |= 1 << (q & 63);
            t.z[(q + num_qubits) * words + (q >> 6)] |= 1 << (q & 63);
        }
        t
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    #[inline]
    fn bit(&self, plane: &[u64], row: usize, q: usize) -> bool {
        (plane[row * self.words + (q >> 6)] >> (q & 63)) & 1 == 1
    }

    fn row_pauli(&self, row: usize) -> PauliString {
        let x = BitVec::from_indices(self.n, (0..self.n).filter(|&q| self.bit(&self.x, row, q)));
        let z = BitVec::from_indices(self.n, (0..self.n).filter(|&q| self.bit(&self.z, row, q)));
        PauliString::from_parts(x, z, if self.r[row] { 2 } else { 0 })
            .expect("row planes share a length")
    }

    pub fn stabilizer(&self, i: usize) -> PauliString {
        self.row_pauli(self.n + i)
    }

    pub fn destabilizer(&self, i: usize) -> PauliString {
        self.row_pauli(i)
    }

    pub fn stabilizers(&self) -> Vec<PauliString> {
        (0..self.n).map(|i| self.stabilizer(i)).collect()
    }

    fn check_gate(&self, gate: &CliffordGate) -> Result<()> {
        if gate.max_qubit() >= self.n {
            return Err(Error::QubitOutOfRange {
                index: gate.max_qubit(),
                num_qubits: self.n,
            });
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &CliffordGate) -> Result<()> {
        self.check_gate(gate)?;
        let a = gate.targets()[0];
        let (wa, ma) = (a >> 6, 1u64 << (a & 63));
        let w = self.words;
        for row in 0..2 * self.n {
            let base = row * w;
            let xa = self.x[base + wa] & ma != 0;
            let za = self.z[base + wa] & ma != 0;
            match gate.kind() {
                GateKind::H => {
                    self.r[row] ^= xa && za;
                    if xa != za {
                        self.x[base + wa] ^= ma;
                        self.z[base + wa] ^= ma;
                    }
                }
                GateKind::S => {
                    self.r[row] ^= xa && za;
                    if xa {
                        self.z[base + wa] ^= ma;
                    }
                }
                GateKind::X => self.r[row] ^= za,
                GateKind::Z => self.r[row] ^= xa,
                GateKind::Cnot => {
                    let b = gate.targets()[1];
                    let (wb, mb) = (b >> 6, 1u64 << (b & 63));
                    let xb = self.x[base + wb] & mb != 0;
                    let zb = self.z[base + wb] & mb != 0;
                    self.r[row] ^= xa && zb && (xb == za);
                    if xa {
                        self.x[base + wb] ^= mb;
                    }
                    if zb {
                        self.z[base + wa] ^= ma;
                    }
                }
            }
        }
        Ok(())
    }

    /// Row `h <- row i * row h`, tracking the sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let w = self.words;
        let mut ph = 2 * (self.r[h] as i32) + 2 * (self.r[i] as i32);
        for k in 0..w {
            ph += product_phase_word(
                self.x[i * w + k],
                self.z[i * w + k],
                self.x[h * w + k],
                self.z[h * w + k],
            );
        }
        self.r[h] = ph.rem_euclid(4) == 2;
        for k in 0..w {
            self.x[h * w + k] ^= self.x[i * w + k];
            self.z[h * w + k] ^= self.z[i * w + k];
        }
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        for k in 0..w {
            self.x[dst * w + k] = self.x[src * w + k];
            self.z[dst * w + k] = self.z[src * w + k];
        }
        self.r[dst] = self.r[src];
    }

    fn clear_row(&mut self, row: usize) {
        let w = self.words;
        for k in 0..w {
            self.x[row * w + k] = 0;
            self.z[row * w + k] = 0;
        }
        self.r[row] = false;
    }

    fn measure_z<R: Rng + ?Sized>(&mut self, a: usize, rng: &mut R) -> MeasureOutcome {
        let n = self.n;
        let pivot = (n..2 * n).find(|&p| self.bit(&self.x, p, a));
        match pivot {
            Some(p) => {
                for i in 0..2 * n {
                    if i != p && self.bit(&self.x, i, a) {
                        self.rowsum(i, p);
                    }
                }
                self.copy_row(p - n, p);
                self.clear_row(p);
                self.z[p * self.words + (a >> 6)] |= 1 << (a & 63);
                let bit = rng.gen::<bool>();
                self.r[p] = bit;
                MeasureOutcome {
                    bit,
                    deterministic: false,
                }
            }
            None => {
                let scratch = 2 * n;
                self.clear_row(scratch);
                for i in 0..n {
                    if self.bit(&self.x, i, a) {
                        self.rowsum(scratch, i + n);
                    }
                }
                MeasureOutcome {
                    bit: self.r[scratch],
                    deterministic: true,
                }
            }
        }
    }

    /// Projective single-qubit measurement; collapses the state.
    pub fn measure<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<MeasureOutcome> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                num_qubits: self.n,
            });
        }
        Ok(match basis {
            Basis::Z => self.measure_z(qubit, rng),
            Basis::X => {
                let h = CliffordGate::h(qubit);
                self.apply(&h)?;
                let out = self.measure_z(qubit, rng);
                self.apply(&h)?;
                out
            }
        })
    }

    /// Measure then flip to the `+1` eigenstate of `basis`.
    pub fn reset<R: Rng + ?Sized>(
        &mut self,
        qubit: usize,
        basis: Basis,
        rng: &mut R,
    ) -> Result<()> {
        let out = self.measure(qubit, basis, rng)?;
        if out.bit {
            let fix = match basis {
                Basis::Z => CliffordGate::x(qubit),
                Basis::X => CliffordGate::z(qubit),
            };
            self.apply(&fix)?;
        }
        Ok(())
    }

    /// Whether `±p` lies in the stabilizer group; returns the sign relating
    /// `p` to the group element (`+1` when `p` itself is a stabilizer).
    pub fn group_contains(&self, p: &PauliString) -> Result<Option<i8>> {
        if p.num_qubits() != self.n {
            return Err(Error::LengthMismatch {
                left: p.num_qubits(),
                right: self.n,
            });
        }
        let mut acc = PauliString::identity(self.n);
        for i in 0..self.n {
            if !self.stabilizer(i).commutes(p)? {
                return Ok(None);
            }
            if !self.destabilizer(i).commutes(p)? {
                acc.mul_assign_right(&self.stabilizer(i));
            }
        }
        if acc.x_bits() != p.x_bits() || acc.z_bits() != p.z_bits() {
            return Ok(None);
        }
        Ok(match (p.phase() + 4 - acc.phase()) & 3 {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        })
    }

    /// Checks the symplectic structure: stabilizers commute pairwise and
    /// destabilizer `i` anticommutes exactly with stabilizer `i`.
    pub fn is_consistent(&self) -> bool {
        let stabs = self.stabilizers();
        let destabs: Vec<_> = (0..self.n).map(|i| self.destabilizer(i)).collect();
        for i in 0..self.n {
            for j in 0..self.n {
                let sc = stabs[i].commutes(&stabs[j]).unwrap();
                let dc = destabs[i].commutes(&destabs[j]).unwrap();
                let mixed = destabs[i].commutes(&stabs[j]).unwrap();
                if !sc || !dc || mixed == (i == j) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn hadamard_turns_z_stabilizer_into_x() {
        let mut t = StabilizerTableau::new(1);
        assert_eq!(t.stabilizer(0), p("Z"));
        t.apply(&CliffordGate::h(0)).unwrap();
        assert_eq!(t.stabilizer(0), p("X"));
    }

    #[test]
    fn measurements_on_zero_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut t = StabilizerTableau::new(2);
        let out = t.measure(0, Basis::Z, &mut rng).unwrap();
        assert_eq!(
            out,
            MeasureOutcome {
                bit: false,
                deterministic: true
            }
        );
        let out = t.measure(1, Basis::X, &mut rng).unwrap();
        assert!(!out.deterministic);
        let again = t.measure(1, Basis::X, &mut rng).unwrap();
        assert!(again.deterministic);
        assert_eq!(again.bit, out.bit);
        assert!(t.is_consistent());
    }

    #[test]
    fn bell_state_membership_and_signs() {
        let mut t = StabilizerTableau::new(2);
        t.apply(&CliffordGate::h(0)).unwrap();
        t.apply(&CliffordGate::cnot(0, 1)).unwrap();
        assert_eq!(t.group_contains(&p("XX")).unwrap(), Some(1));
        assert_eq!(t.group_contains(&p("ZZ")).unwrap(), Some(1));
        assert_eq!(t.group_contains(&p("YY")).unwrap(), Some(-1));
        assert_eq!(t.group_contains(&p("-YY")).unwrap(), Some(1));
        assert_eq!(t.group_contains(&p("XI")).unwrap(), None);
        assert_eq!(t.group_contains(&p("ZX")).unwrap(), None);
    }

    #[test]
    fn reset_prepares_plus_one_eigenstates() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = StabilizerTableau::new(1);
        t.apply(&CliffordGate::h(0)).unwrap();
        t.apply(&CliffordGate::z(0)).unwrap();
        assert_eq!(t.group_contains(&p("-X")).unwrap(), Some(1));
        t.reset(0, Basis::X, &mut rng).unwrap();
        assert_eq!(t.group_contains(&p("X")).unwrap(), Some(1));
        t.reset(0, Basis::Z, &mut rng).unwrap();
        assert_eq!(t.group_contains(&p("Z")).unwrap(), Some(1));
    }
}
