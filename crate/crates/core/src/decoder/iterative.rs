//! Patch-by-patch decoding with cross-patch syndrome toggles.
//!
//! A correction edge chosen in one patch may imply detector flips in other
//! patches (faults spread by transversal CNOTs). Those flips are XORed into
//! the partner patches' syndromes and the affected patches are decoded
//! again, until the toggles stop changing or the iteration cap is hit.

use serde::{Deserialize, Serialize};

use super::graph::{build_matching_graph, MatchingGraph};
use super::mwpm::mwpm_decode;
use crate::circuit::{enumerate_error_mechanisms, Circuit, ErrorMechanism};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterativeConfig {
    pub max_global_iters: usize,
}

impl Default for IterativeConfig {
    fn default() -> Self {
        Self {
            max_global_iters: 3,
        }
    }
}

impl IterativeConfig {
    pub fn new(max_global_iters: usize) -> Result<Self> {
        if max_global_iters == 0 {
            return Err(Error::Config("max_global_iters must be at least 1".into()));
        }
        Ok(Self { max_global_iters })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecodeResult {
    /// Mechanism ids of the chosen edges, per patch.
    pub corrections: Vec<Vec<usize>>,
    pub observables: u64,
    pub checks: u64,
    pub frame: bool,
    pub iterations_used: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub accepted: bool,
    pub frame_offset: bool,
    pub output_error: bool,
}

/// Applies decoded flips to the observed parities of one shot. `checks`
/// and `observables` are flips relative to the noiseless reference.
pub fn predict_outcome(
    result: &DecodeResult,
    observables: u64,
    checks: u64,
    frame: bool,
) -> Outcome {
    Outcome {
        accepted: checks ^ result.checks == 0,
        frame_offset: frame ^ result.frame,
        output_error: (observables ^ result.observables) & 1 == 1,
    }
}

pub struct IterativeDecoder {
    graphs: Vec<MatchingGraph>,
    /// `(patch, local node)` of each global detector.
    locate: Vec<(usize, usize)>,
    config: IterativeConfig,
}

fn xor_into(set: &mut Vec<usize>, other: &[usize]) {
    for &x in other {
        match set.binary_search(&x) {
            Ok(i) => {
                set.remove(i);
            }
            Err(i) => set.insert(i, x),
        }
    }
}

impl IterativeDecoder {
    pub fn new(
        circuit: &Circuit,
        mechanisms: &[ErrorMechanism],
        config: IterativeConfig,
    ) -> Result<Self> {
        IterativeConfig::new(config.max_global_iters)?;
        let graphs = (0..circuit.patches().len())
            .map(|p| build_matching_graph(circuit, mechanisms, p))
            .collect::<Result<Vec<_>>>()?;
        let mut locate = vec![(0, 0); circuit.detectors().len()];
        for g in &graphs {
            for (i, &d) in g.nodes.iter().enumerate() {
                locate[d] = (g.patch, i);
            }
        }
        Ok(Self {
            graphs,
            locate,
            config,
        })
    }

    pub fn from_circuit(circuit: &Circuit, config: IterativeConfig) -> Result<Self> {
        let mechanisms = enumerate_error_mechanisms(circuit)?;
        Self::new(circuit, &mechanisms, config)
    }

    pub fn graphs(&self) -> &[MatchingGraph] {
        &self.graphs
    }

    pub fn config(&self) -> IterativeConfig {
        self.config
    }

    /// Decodes one shot given the global ids of the fired detectors.
    pub fn decode(&self, fired: &[usize]) -> Result<DecodeResult> {
        let np = self.graphs.len();
        let mut raw = vec![Vec::new(); np];
        for &d in fired {
            let (p, l) = self.locate[d];
            raw[p].push(l);
        }
        for r in &mut raw {
            r.sort_unstable();
        }
        let mut toggles: Vec<Vec<usize>> = vec![Vec::new(); np];
        let mut edges: Vec<Vec<usize>> = vec![Vec::new(); np];
        let mut dirty: Vec<bool> = raw.iter().map(|r| !r.is_empty()).collect();
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.config.max_global_iters {
            iterations += 1;
            for p in (0..np).filter(|&p| dirty[p]) {
                let mut syndrome = raw[p].clone();
                xor_into(&mut syndrome, &toggles[p]);
                edges[p] = mwpm_decode(&self.graphs[p], &syndrome)?.edges;
            }
            let mut next: Vec<Vec<usize>> = vec![Vec::new(); np];
            for (p, es) in edges.iter().enumerate() {
                for &e in es {
                    for &d in &self.graphs[p].edges[e].foreign {
                        let (q, l) = self.locate[d];
                        xor_into(&mut next[q], &[l]);
                    }
                }
            }
            for p in 0..np {
                dirty[p] = next[p] != toggles[p];
            }
            toggles = next;
            if !dirty.iter().any(|&x| x) {
                converged = true;
                break;
            }
        }
        let mut result = DecodeResult {
            corrections: Vec::with_capacity(np),
            iterations_used: iterations.max(1),
            converged,
            ..Default::default()
        };
        for (p, es) in edges.iter().enumerate() {
            let g = &self.graphs[p];
            for &e in es {
                result.observables ^= g.edges[e].observables;
                result.checks ^= g.edges[e].checks;
                result.frame ^= g.edges[e].frame;
            }
            result
                .corrections
                .push(es.iter().map(|&e| g.edges[e].mechanism).collect());
        }
        Ok(result)
    }
}
