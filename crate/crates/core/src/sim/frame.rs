//! Bit-packed Pauli frames, one bit lane per shot (or per injected fault).

use rand::Rng;

use crate::circuit::{Circuit, Instruction};
use crate::pauli::{Basis, GateKind};

pub struct FrameState {
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    meas: Vec<u64>,
}

impl FrameState {
    pub fn new(num_qubits: usize, num_measurements: usize, words: usize) -> Self {
        Self {
            words,
            x: vec![0; num_qubits * words],
            z: vec![0; num_qubits * words],
            meas: vec![0; num_measurements * words],
        }
    }

    pub fn words(&self) -> usize {
        self.words
    }

    pub fn clear(&mut self) {
        self.x.fill(0);
        self.z.fill(0);
        self.meas.fill(0);
    }

    #[inline]
    fn range(&self, index: usize) -> std::ops::Range<usize> {
        index * self.words..(index + 1) * self.words
    }

    #[inline]
    pub fn x_mut(&mut self, q: usize) -> &mut [u64] {
        let r = self.range(q);
        &mut self.x[r]
    }

    #[inline]
    pub fn z_mut(&mut self, q: usize) -> &mut [u64] {
        let r = self.range(q);
        &mut self.z[r]
    }

    #[inline]
    pub fn meas(&self, m: usize) -> &[u64] {
        &self.meas[self.range(m)]
    }

    #[inline]
    pub fn meas_mut(&mut self, m: usize) -> &mut [u64] {
        let r = self.range(m);
        &mut self.meas[r]
    }

    #[inline]
    pub fn flip_x(&mut self, q: usize, word: usize, bits: u64) {
        self.x[q * self.words + word] ^= bits;
    }

    #[inline]
    pub fn flip_z(&mut self, q: usize, word: usize, bits: u64) {
        self.z[q * self.words + word] ^= bits;
    }

    #[inline]
    pub fn flip_meas(&mut self, m: usize, word: usize, bits: u64) {
        self.meas[m * self.words + word] ^= bits;
    }

    fn cx(&mut self, c: usize, t: usize) {
        let w = self.words;
        for k in 0..w {
            self.x[t * w + k] ^= self.x[c * w + k];
            self.z[c * w + k] ^= self.z[t * w + k];
        }
    }

    fn gate(&mut self, kind: GateKind, q: usize) {
        let r = self.range(q);
        match kind {
            GateKind::H => {
                for k in r {
                    std::mem::swap(&mut self.x[k], &mut self.z[k]);
                }
            }
            GateKind::S => {
                for k in r {
                    self.z[k] ^= self.x[k];
                }
            }
            GateKind::X | GateKind::Z | GateKind::Cnot => {}
        }
    }

    /// Component anticommuting with the prepared or measured eigenbasis is
    /// cleared; the commuting one is a gauge and is randomized when `gauge`
    /// is given.
    fn collapse<R: Rng + ?Sized>(&mut self, q: usize, basis: Basis, gauge: Option<&mut R>) {
        let r = self.range(q);
        let (kill, free) = match basis {
            Basis::Z => (&mut self.x, &mut self.z),
            Basis::X => (&mut self.z, &mut self.x),
        };
        kill[r.clone()].fill(0);
        match gauge {
            Some(rng) => free[r].iter_mut().for_each(|w| *w = rng.gen()),
            None => free[r].fill(0),
        }
    }

    fn record(&mut self, q: usize, basis: Basis, m: usize) {
        let (src, dst) = (self.range(q), self.range(m));
        let plane = match basis {
            Basis::Z => &self.x,
            Basis::X => &self.z,
        };
        let (a, b) = (src.start, dst.start);
        self.meas[b..b + self.words].copy_from_slice(&plane[a..a + self.words]);
    }
}

/// Runs the Clifford skeleton of `circuit` over `state`. After each noise
/// instruction (and after each measurement instruction has been recorded),
/// `noise` is called with the instruction index, the instruction and the
/// index of its first measurement.
pub fn propagate<R, F>(
    circuit: &Circuit,
    state: &mut FrameState,
    mut gauge: Option<&mut R>,
    mut noise: F,
) where
    R: Rng + ?Sized,
    F: FnMut(usize, &Instruction, usize, &mut FrameState),
{
    let mut next_meas = 0;
    for (i, inst) in circuit.instructions().iter().enumerate() {
        match inst {
            Instruction::Reset { basis, targets } => {
                for &q in targets {
                    state.collapse(q, *basis, gauge.as_deref_mut());
                }
            }
            Instruction::Gate { kind, targets } => {
                for &q in targets {
                    state.gate(*kind, q);
                }
            }
            Instruction::Cx { pairs } => {
                for &(c, t) in pairs {
                    state.cx(c, t);
                }
            }
            Instruction::Measure { basis, targets, .. } => {
                let first = next_meas;
                for &q in targets {
                    state.record(q, *basis, next_meas);
                    state.collapse(q, *basis, gauge.as_deref_mut());
                    next_meas += 1;
                }
                noise(i, inst, first, state);
            }
            Instruction::Depolarize1 { .. }
            | Instruction::Depolarize2 { .. }
            | Instruction::LogicalZError { .. } => noise(i, inst, next_meas, state),
            Instruction::Tick
            | Instruction::Detector { .. }
            | Instruction::Observable { .. }
            | Instruction::Check { .. }
            | Instruction::Frame { .. } => {}
        }
    }
}

/// XOR of the measurement planes in `meas`, written into `out`.
pub fn parity_plane(state: &FrameState, meas: &[usize], out: &mut [u64]) {
    out.fill(0);
    for &m in meas {
        for (o, w) in out.iter_mut().zip(state.meas(m)) {
            *o ^= w;
        }
    }
}
