//! Simulation back ends: bit-packed frame propagation and a tableau
//! reference runner.

pub mod frame;
mod reference;
mod sampler;

pub use reference::{parity, reference_measurements};
pub use sampler::{chunk_rng, chunk_sizes, sample, sample_chunk, ShotBatch, CHUNK_SHOTS};
