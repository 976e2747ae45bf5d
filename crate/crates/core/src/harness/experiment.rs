//! Experiment orchestration: logical-level and surface-code runs.

use std::path::PathBuf;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{wilson_interval, ExperimentStats, Z95};
use crate::circuit::{
    build_cnot_subcircuit_experiment, build_distillation_circuit, build_memory_circuit_in_basis,
    subcircuit_rounds, Circuit, NoiseModel,
};
use crate::decoder::{predict_outcome, IterativeConfig, IterativeDecoder};
use crate::error::{Error, Result};
use crate::pauli::Basis;
use crate::protocols::{build_protocol, LogicalSimulator, ProtocolKind};
use crate::sim::{chunk_rng, chunk_sizes, sample_chunk};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    pub d: usize,
    pub p_circuit: f64,
    pub p_in: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    pub decoder: IterativeConfig,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            protocol: ProtocolKind::SevenToOne,
            d: 3,
            p_circuit: 0.0,
            p_in: default_p_in_sweep(),
            shots: 10_000,
            seed: 0,
            decoder: IterativeConfig::default(),
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

/// Logarithmic sweep from 1e-3 to 0.3.
pub fn default_p_in_sweep() -> Vec<f64> {
    vec![0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3]
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.shots == 0 {
            return Err(Error::Config("shots must be at least 1".into()));
        }
        if self.d < 3 || self.d.is_multiple_of(2) {
            return Err(Error::InvalidDistance(self.d));
        }
        for &p in self.p_in.iter().chain([&self.p_circuit]) {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        IterativeConfig::new(self.decoder.max_global_iters)?;
        Ok(())
    }
}

/// Seed for point `index` of a sweep, so points are independent streams.
fn point_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Logical-level Monte Carlo: each resource fails independently with
/// probability `p_in` and the outcome comes from the tableau simulation of
/// the resulting pattern.
pub fn run_logical(config: &ExperimentConfig) -> Result<Vec<ExperimentStats>> {
    config.validate()?;
    let spec = build_protocol(config.protocol);
    let sim = LogicalSimulator::new(&spec);
    let k = spec.num_resources();
    // outcomes are a function of the pattern; tabulate them lazily
    let mut table: Vec<Option<(bool, bool)>> = vec![None; 1 << k];
    let mut gauge = chunk_rng(config.seed, u64::MAX);
    let mut out = Vec::new();
    for (i, &p) in config.p_in.iter().enumerate() {
        let mut rng = chunk_rng(point_seed(config.seed, i), 0);
        let (mut accepted, mut errors) = (0u64, 0u64);
        for _ in 0..config.shots {
            let pattern = (0..k).fold(0u64, |acc, r| acc | (u64::from(rng.gen_bool(p)) << r));
            let (acc, err) = *table[pattern as usize].get_or_insert_with(|| {
                let rec = sim.run_shot(pattern, &mut gauge);
                (rec.accepted, rec.output_error)
            });
            accepted += u64::from(acc);
            errors += u64::from(acc && err);
        }
        out.push(ExperimentStats::from_counts(config.shots, accepted, errors));
    }
    Ok(out)
}

/// Raw tallies of a decoded surface-code run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunCounts {
    pub shots: u64,
    pub accepted: u64,
    /// Accepted shots whose observable 0 was decoded wrongly.
    pub output_errors: u64,
    /// Shots with any observable decoded wrongly (ignoring acceptance).
    pub any_observable_failures: u64,
    pub iterations: Vec<u64>,
    pub unconverged: u64,
}

impl RunCounts {
    fn merge(mut self, other: RunCounts) -> RunCounts {
        self.shots += other.shots;
        self.accepted += other.accepted;
        self.output_errors += other.output_errors;
        self.any_observable_failures += other.any_observable_failures;
        self.unconverged += other.unconverged;
        if self.iterations.len() < other.iterations.len() {
            self.iterations.resize(other.iterations.len(), 0);
        }
        for (a, b) in self.iterations.iter_mut().zip(&other.iterations) {
            *a += b;
        }
        self
    }

    pub fn stats(&self) -> ExperimentStats {
        ExperimentStats::from_counts(self.shots, self.accepted, self.output_errors)
            .with_iterations(self.iterations.clone(), self.unconverged)
    }
}

/// Samples and decodes `shots` shots of `circuit`. Chunks are processed in
/// parallel and merged in chunk order, so results depend only on the seed.
pub fn run_circuit(
    circuit: &Circuit,
    decoder: &IterativeDecoder,
    shots: u64,
    seed: u64,
) -> Result<RunCounts> {
    let obs_mask = if circuit.observables().len() >= 64 {
        !0
    } else {
        (1u64 << circuit.observables().len()) - 1
    };
    let chunks: Vec<(u64, usize)> = chunk_sizes(shots as usize).collect();
    let parts = chunks
        .par_iter()
        .map(|&(chunk, n)| -> Result<RunCounts> {
            let batch = sample_chunk(circuit, n, seed, chunk);
            let mut counts = RunCounts {
                shots: n as u64,
                iterations: vec![0; decoder.config().max_global_iters],
                ..Default::default()
            };
            let num_det = batch.num_detectors();
            let mut fired = Vec::new();
            for shot in 0..n {
                fired.clear();
                let (w, b) = (shot / 64, shot % 64);
                for d in 0..num_det {
                    if (batch.detectors[d * batch.words + w] >> b) & 1 == 1 {
                        fired.push(d);
                    }
                }
                let result = decoder.decode(&fired)?;
                let obs = batch.observable_mask(shot);
                let outcome =
                    predict_outcome(&result, obs, batch.check_mask(shot), batch.frame_bit(shot));
                counts.iterations[result.iterations_used - 1] += 1;
                counts.unconverged += u64::from(!result.converged);
                counts.any_observable_failures +=
                    u64::from((obs ^ result.observables) & obs_mask != 0);
                if outcome.accepted {
                    counts.accepted += 1;
                    counts.output_errors += u64::from(outcome.output_error);
                }
            }
            Ok(counts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts
        .into_iter()
        .fold(RunCounts::default(), RunCounts::merge))
}

/// Surface-code distillation: build, sample, decode, post-select.
pub fn run_distillation(config: &ExperimentConfig) -> Result<Vec<ExperimentStats>> {
    Ok(run_distillation_counts(config)?
        .iter()
        .map(RunCounts::stats)
        .collect())
}

pub fn run_distillation_counts(config: &ExperimentConfig) -> Result<Vec<RunCounts>> {
    config.validate()?;
    let spec = build_protocol(config.protocol);
    let mut decoder = None;
    let mut out = Vec::new();
    for (i, &p_in) in config.p_in.iter().enumerate() {
        let circuit =
            build_distillation_circuit(&spec, config.d, NoiseModel::new(config.p_circuit, p_in)?)?;
        // injections carry no detectors, so the graphs depend only on p_circuit
        let dec = match decoder.take() {
            Some(dec) => dec,
            None => IterativeDecoder::from_circuit(&circuit, config.decoder)?,
        };
        out.push(run_circuit(
            &circuit,
            &dec,
            config.shots,
            point_seed(config.seed, i),
        )?);
        decoder = Some(dec);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemoryStats {
    pub d: usize,
    pub rounds: usize,
    pub basis: char,
    pub p_circuit: f64,
    pub shots: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

pub fn run_memory(
    d: usize,
    rounds: usize,
    p_circuit: f64,
    basis: Basis,
    shots: u64,
    seed: u64,
) -> Result<MemoryStats> {
    let circuit =
        build_memory_circuit_in_basis(d, rounds, NoiseModel::new(p_circuit, 0.0)?, basis)?;
    let decoder = IterativeDecoder::from_circuit(&circuit, IterativeConfig::default())?;
    let counts = run_circuit(&circuit, &decoder, shots, seed)?;
    let (ci_lo, ci_hi) = wilson_interval(counts.any_observable_failures, shots, Z95);
    Ok(MemoryStats {
        d,
        rounds,
        basis: if basis == Basis::X { 'X' } else { 'Z' },
        p_circuit,
        shots,
        failures: counts.any_observable_failures,
        rate: counts.any_observable_failures as f64 / shots as f64,
        ci_lo,
        ci_hi,
    })
}

/// Memory experiment with as many rounds as the protocol's CNOT sub-circuit.
pub fn run_memory_baseline(config: &ExperimentConfig) -> Result<MemoryStats> {
    config.validate()?;
    let rounds = subcircuit_rounds(&build_protocol(config.protocol));
    run_memory(
        config.d,
        rounds,
        config.p_circuit,
        Basis::Z,
        config.shots,
        config.seed,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubcircuitBasisRun {
    pub basis: char,
    pub num_observables: usize,
    pub shots: u64,
    /// Shots with at least one observable decoded wrongly.
    pub failures: u64,
    pub memory: MemoryStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubcircuitComparison {
    pub runs: Vec<SubcircuitBasisRun>,
    /// Observables across both runs (one per patch).
    pub num_observables: usize,
    /// Probability that any observable of either run fails.
    pub p_fail: f64,
    /// `1 - (1 - p_fail)^(1 / num_observables)`.
    pub per_observable_rate: f64,
    /// Probability that a memory patch fails in either basis.
    pub memory_rate: f64,
    pub ratio: f64,
}

/// CNOT sub-circuit logical failure rate per observable against memory
/// experiments with the same number of rounds.
///
/// Each basis run detects logical errors of one type on every patch, as
/// does the memory run of the same basis on its single patch. Combining
/// both runs yields one observable per patch, and the matching memory
/// quantity is the chance of failing in either basis.
pub fn run_subcircuit_comparison(config: &ExperimentConfig) -> Result<SubcircuitComparison> {
    config.validate()?;
    let spec = build_protocol(config.protocol);
    let noise = NoiseModel::new(config.p_circuit, 0.0)?;
    let mut runs = Vec::new();
    for (i, basis) in [Basis::X, Basis::Z].into_iter().enumerate() {
        let circuit = build_cnot_subcircuit_experiment(&spec, config.d, noise, basis)?;
        let decoder = IterativeDecoder::from_circuit(&circuit, config.decoder)?;
        let counts = run_circuit(
            &circuit,
            &decoder,
            config.shots,
            point_seed(config.seed, 2 * i),
        )?;
        let memory = run_memory(
            config.d,
            subcircuit_rounds(&spec),
            config.p_circuit,
            basis,
            config.shots,
            point_seed(config.seed, 2 * i + 1),
        )?;
        runs.push(SubcircuitBasisRun {
            basis: if basis == Basis::X { 'X' } else { 'Z' },
            num_observables: circuit.observables().len(),
            shots: config.shots,
            failures: counts.any_observable_failures,
            memory,
        });
    }
    let survive: f64 = runs
        .iter()
        .map(|r| 1.0 - r.failures as f64 / r.shots as f64)
        .product();
    let memory_survive: f64 = runs.iter().map(|r| 1.0 - r.memory.rate).product();
    let num_observables = runs.iter().map(|r| r.num_observables).sum::<usize>();
    let per_observable_rate = 1.0 - survive.powf(1.0 / num_observables as f64);
    let memory_rate = 1.0 - memory_survive;
    Ok(SubcircuitComparison {
        runs,
        num_observables,
        p_fail: 1.0 - survive,
        per_observable_rate,
        memory_rate,
        ratio: if memory_rate > 0.0 {
            per_observable_rate / memory_rate
        } else {
            f64::INFINITY
        },
    })
}
