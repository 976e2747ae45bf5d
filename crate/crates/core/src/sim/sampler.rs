//! Monte Carlo Pauli-frame sampling. Every bit is a flip relative to the
//! noiseless reference run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};

use super::frame::{parity_plane, propagate, FrameState};
use crate::circuit::{Circuit, Instruction};
use crate::pauli::words_for;

/// Shots per independently seeded chunk.
pub const CHUNK_SHOTS: usize = 1024;

/// Bit planes indexed `[row * words + word]`; shot `s` is bit `s % 64` of
/// word `s / 64` in every plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotBatch {
    pub num_shots: usize,
    pub words: usize,
    pub measurements: Vec<u64>,
    pub detectors: Vec<u64>,
    pub observables: Vec<u64>,
    pub checks: Vec<u64>,
    pub frame: Vec<u64>,
}

fn bit(plane: &[u64], words: usize, row: usize, shot: usize) -> bool {
    (plane[row * words + shot / 64] >> (shot % 64)) & 1 == 1
}

impl ShotBatch {
    pub fn num_detectors(&self) -> usize {
        self.detectors.len() / self.words.max(1)
    }

    pub fn detector(&self, det: usize, shot: usize) -> bool {
        bit(&self.detectors, self.words, det, shot)
    }

    pub fn measurement(&self, m: usize, shot: usize) -> bool {
        bit(&self.measurements, self.words, m, shot)
    }

    pub fn observable(&self, id: usize, shot: usize) -> bool {
        bit(&self.observables, self.words, id, shot)
    }

    pub fn check(&self, id: usize, shot: usize) -> bool {
        bit(&self.checks, self.words, id, shot)
    }

    pub fn frame_bit(&self, shot: usize) -> bool {
        !self.frame.is_empty() && bit(&self.frame, self.words, 0, shot)
    }

    /// Detector indices that fired in `shot`.
    pub fn fired_detectors(&self, shot: usize) -> Vec<usize> {
        (0..self.num_detectors())
            .filter(|&d| self.detector(d, shot))
            .collect()
    }

    /// Observable flips of `shot` as a bit mask.
    pub fn observable_mask(&self, shot: usize) -> u64 {
        mask_of(&self.observables, self.words, shot)
    }

    pub fn check_mask(&self, shot: usize) -> u64 {
        mask_of(&self.checks, self.words, shot)
    }

    fn concat(parts: Vec<ShotBatch>) -> ShotBatch {
        let words: usize = parts.iter().map(|p| p.words).sum();
        let num_shots = parts.iter().map(|p| p.num_shots).sum();
        let join = |get: fn(&ShotBatch) -> &Vec<u64>| {
            let rows = parts.first().map_or(0, |p| get(p).len() / p.words.max(1));
            let mut out = vec![0u64; rows * words];
            let mut offset = 0;
            for p in &parts {
                for r in 0..rows {
                    out[r * words + offset..r * words + offset + p.words]
                        .copy_from_slice(&get(p)[r * p.words..(r + 1) * p.words]);
                }
                offset += p.words;
            }
            out
        };
        ShotBatch {
            num_shots,
            words,
            measurements: join(|p| &p.measurements),
            detectors: join(|p| &p.detectors),
            observables: join(|p| &p.observables),
            checks: join(|p| &p.checks),
            frame: join(|p| &p.frame),
        }
    }
}

fn mask_of(plane: &[u64], words: usize, shot: usize) -> u64 {
    let rows = plane.len() / words.max(1);
    (0..rows.min(64)).fold(0, |acc, r| {
        acc | (u64::from(bit(plane, words, r, shot)) << r)
    })
}

/// Calls `hit(rng, item, lane)` for each of `items * lanes` trials that
/// succeeds with probability `p`.
fn for_each_hit<R: Rng + ?Sized>(
    rng: &mut R,
    p: f64,
    items: usize,
    lanes: usize,
    mut hit: impl FnMut(&mut R, usize, usize),
) {
    let total = items * lanes;
    if p <= 0.0 || total == 0 {
        return;
    }
    if p >= 1.0 {
        (0..total).for_each(|k| hit(rng, k / lanes, k % lanes));
        return;
    }
    let geo = Geometric::new(p).expect("p in (0,1)");
    let mut pos = geo.sample(rng);
    while pos < total as u64 {
        let k = pos as usize;
        hit(rng, k / lanes, k % lanes);
        pos = pos.saturating_add(1 + geo.sample(rng));
    }
}

pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Applies Pauli `code` (bit 0: X, bit 1: Z) to lane `lane` of qubit `q`.
#[inline]
fn apply_pauli(st: &mut FrameState, q: usize, code: u8, lane: usize) {
    let (w, b) = (lane / 64, 1u64 << (lane % 64));
    if code & 1 != 0 {
        st.flip_x(q, w, b);
    }
    if code & 2 != 0 {
        st.flip_z(q, w, b);
    }
}

/// Samples `shots` lanes of chunk `chunk` with the gauge and noise streams
/// derived from `(seed, chunk)`.
pub fn sample_chunk(circuit: &Circuit, shots: usize, seed: u64, chunk: u64) -> ShotBatch {
    let words = words_for(shots).max(1);
    let mut gauge = chunk_rng(seed, 2 * chunk);
    let mut rng = chunk_rng(seed, 2 * chunk + 1);
    let mut state = FrameState::new(circuit.num_qubits(), circuit.num_measurements(), words);
    propagate(
        circuit,
        &mut state,
        Some(&mut gauge),
        |_, inst, first_meas, st| match inst {
            Instruction::Depolarize1 { p, targets } => {
                for_each_hit(&mut rng, *p, targets.len(), shots, |r, i, lane| {
                    apply_pauli(st, targets[i], r.gen_range(1..4u8), lane);
                });
            }
            Instruction::Depolarize2 { p, pairs } => {
                for_each_hit(&mut rng, *p, pairs.len(), shots, |r, i, lane| {
                    let code = r.gen_range(1..16u8);
                    apply_pauli(st, pairs[i].0, code & 3, lane);
                    apply_pauli(st, pairs[i].1, code >> 2, lane);
                });
            }
            Instruction::Measure { flip, targets, .. } => {
                for_each_hit(&mut rng, *flip, targets.len(), shots, |_, i, lane| {
                    st.flip_meas(first_meas + i, lane / 64, 1 << (lane % 64));
                });
            }
            Instruction::LogicalZError { p, targets } => {
                for_each_hit(&mut rng, *p, 1, shots, |_, _, lane| {
                    for &q in targets {
                        apply_pauli(st, q, 2, lane);
                    }
                });
            }
            _ => {}
        },
    );
    // zero the lanes past `shots` in the last word
    let tail = if shots == 0 {
        0
    } else if shots.is_multiple_of(64) {
        !0u64
    } else {
        (1u64 << (shots % 64)) - 1
    };
    let extract = |sets: &mut dyn Iterator<Item = &Vec<usize>>| {
        let mut planes = Vec::new();
        let mut buf = vec![0u64; words];
        for set in sets {
            parity_plane(&state, set, &mut buf);
            buf[words - 1] &= tail;
            planes.extend_from_slice(&buf);
        }
        planes
    };
    let detectors = extract(&mut circuit.detectors().iter().map(|d| &d.meas));
    let observables = extract(&mut circuit.observables().iter());
    let checks = extract(&mut circuit.checks().iter());
    let frame_set = circuit.frame().map(|f| f.to_vec());
    let frame = extract(&mut frame_set.iter());
    let mut measurements = Vec::with_capacity(circuit.num_measurements() * words);
    for m in 0..circuit.num_measurements() {
        let plane = state.meas(m);
        measurements.extend_from_slice(&plane[..words - 1]);
        measurements.push(plane[words - 1] & tail);
    }
    ShotBatch {
        num_shots: shots,
        words,
        measurements,
        detectors,
        observables,
        checks,
        frame,
    }
}

/// Chunk `c` covers shots `c * CHUNK_SHOTS ..`; results do not depend on
/// how chunks are scheduled.
pub fn chunk_sizes(shots: usize) -> impl Iterator<Item = (u64, usize)> {
    (0..shots.div_ceil(CHUNK_SHOTS))
        .map(move |c| (c as u64, CHUNK_SHOTS.min(shots - c * CHUNK_SHOTS)))
}

/// Samples `shots` shots reproducibly from `seed`.
pub fn sample(circuit: &Circuit, shots: usize, seed: u64) -> ShotBatch {
    let parts: Vec<ShotBatch> = chunk_sizes(shots)
        .map(|(c, n)| sample_chunk(circuit, n, seed, c))
        .collect();
    if parts.is_empty() {
        return sample_chunk(circuit, 0, seed, 0);
    }
    ShotBatch::concat(parts)
}
