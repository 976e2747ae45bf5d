use std::fmt;

use super::bits::BitVec;
use crate::error::{Error, Result};

/// A Pauli operator `i^phase * P_0 ⊗ P_1 ⊗ ...` where each `P_j` is the
/// Hermitian Pauli selected by `(x_j, z_j)`: `(1,0)=X`, `(1,1)=Y`, `(0,1)=Z`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitVec,
    z: BitVec,
    phase: u8,
}

/// Phase exponent (power of `i`) picked up by `a * b` over one word of qubits.
#[inline]
pub(crate) fn product_phase_word(ax: u64, az: u64, bx: u64, bz: u64) -> i32 {
    let (a_x, a_y, a_z) = (ax & !az, ax & az, !ax & az);
    let (b_x, b_y, b_z) = (bx & !bz, bx & bz, !bx & bz);
    let plus = (a_x & b_y) | (a_y & b_z) | (a_z & b_x);
    let minus = (a_x & b_z) | (a_y & b_x) | (a_z & b_y);
    plus.count_ones() as i32 - minus.count_ones() as i32
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        Self {
            x: BitVec::zeros(num_qubits),
            z: BitVec::zeros(num_qubits),
            phase: 0,
        }
    }

    pub fn from_parts(x: BitVec, z: BitVec, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: z.len(),
            });
        }
        Ok(Self {
            x,
            z,
            phase: phase & 3,
        })
    }

    /// Parse a dense label such as `"+XIZY"` or `"-iZZ"`.
    pub fn parse(label: &str) -> Result<Self> {
        let (phase, body) = if let Some(rest) = label.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = label.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = label.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = label.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = label.strip_prefix('+') {
            (0, rest)
        } else {
            (0, label)
        };
        let n = body.chars().count();
        let mut p = Self::identity(n);
        p.phase = phase;
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' | '_' => {}
                'X' => p.x.set(q, true),
                'Z' => p.z.set(q, true),
                'Y' => {
                    p.x.set(q, true);
                    p.z.set(q, true);
                }
                other => {
                    return Err(Error::InvalidGate(format!(
                        "unknown Pauli character {other:?}"
                    )))
                }
            }
        }
        Ok(p)
    }

    /// Single-qubit X/Y/Z on a subset of qubits.
    pub fn x_on(num_qubits: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::identity(num_qubits);
        for q in qubits {
            p.x.set(q, true);
        }
        p
    }

    pub fn z_on(num_qubits: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut p = Self::identity(num_qubits);
        for q in qubits {
            p.z.set(q, true);
        }
        p
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &BitVec {
        &self.x
    }

    pub fn z_bits(&self) -> &BitVec {
        &self.z
    }

    pub(crate) fn x_bits_mut(&mut self) -> &mut BitVec {
        &mut self.x
    }

    pub(crate) fn z_bits_mut(&mut self) -> &mut BitVec {
        &mut self.z
    }

    /// Power of `i` multiplying the Hermitian Pauli product.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub(crate) fn add_phase(&mut self, k: u8) {
        self.phase = (self.phase + k) & 3;
    }

    /// `+1` or `-1` for Hermitian operators; `None` when the phase is `±i`.
    pub fn sign(&self) -> Option<i8> {
        match self.phase {
            0 => Some(1),
            2 => Some(-1),
            _ => None,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::LengthMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Symplectic commutation test.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_len(other)?;
        let odd = self
            .x
            .words()
            .iter()
            .zip(self.z.words())
            .zip(other.x.words().iter().zip(other.z.words()))
            .map(|((ax, az), (bx, bz))| ((ax & bz) ^ (az & bx)).count_ones())
            .sum::<u32>()
            & 1;
        Ok(odd == 0)
    }

    /// Operator product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_right(other);
        Ok(out)
    }

    /// `self <- self * other`; lengths must already agree.
    pub(crate) fn mul_assign_right(&mut self, other: &Self) {
        let mut ph = self.phase as i32 + other.phase as i32;
        for (i, (bx, bz)) in other.x.words().iter().zip(other.z.words()).enumerate() {
            let ax = self.x.words()[i];
            let az = self.z.words()[i];
            ph += product_phase_word(ax, az, *bx, *bz);
        }
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
        self.phase = ph.rem_euclid(4) as u8;
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.phase as usize])?;
        for q in 0..self.num_qubits() {
            let c = match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn commutation_examples() {
        assert!(!p("XI").commutes(&p("ZI")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        let zs = PauliString::z_on(8, [1, 3, 5, 7]);
        let xs = PauliString::x_on(8, [1, 3, 5, 7]);
        assert!(zs.commutes(&xs).unwrap());
    }

    #[test]
    fn length_mismatch_is_an_error() {
        assert!(matches!(
            p("XX").commutes(&p("X")),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(p("XX").multiply(&p("XXX")).is_err());
    }

    #[test]
    fn products_track_phase() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap(), p("-iY"));
        assert_eq!(p("Z").multiply(&p("X")).unwrap(), p("iY"));
        assert_eq!(p("X").multiply(&p("Y")).unwrap(), p("iZ"));
        for s in ["X", "Y", "Z", "-XYZ", "iYY"] {
            let a = p(s);
            let sq = a.multiply(&a).unwrap();
            assert!(sq.is_identity());
            assert!(sq.sign().is_some());
        }
        let a = PauliString::x_on(8, [1, 3, 5, 7]);
        let b = PauliString::x_on(8, [2, 3, 6, 7]);
        assert_eq!(a.multiply(&b).unwrap(), PauliString::x_on(8, [1, 2, 5, 6]));
        assert_eq!(a.multiply(&PauliString::identity(8)).unwrap(), a);
    }

    #[test]
    fn display_round_trips_through_parse() {
        for s in ["+XIZY", "-iZZ", "+iI", "-Y"] {
            assert_eq!(p(s).to_string(), s);
        }
    }
}
