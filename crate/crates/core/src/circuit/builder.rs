//! Multi-patch circuit construction with detector bookkeeping.
//!
//! Each plaquette of each patch carries the set of past measurements whose
//! parity equals its current stabilizer value, or `None` while the value is
//! random. A new measurement of a known plaquette yields a detector.

use super::ir::{Circuit, Instruction, PatchRole};
use super::layout::{build_patch, PatchLayout};
use crate::error::{Error, Result};
use crate::pauli::{Basis, GateKind};
use crate::protocols::ProtocolSpec;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    pub p_circuit: f64,
    pub p_in: f64,
}

impl NoiseModel {
    pub fn new(p_circuit: f64, p_in: f64) -> Result<Self> {
        for p in [p_circuit, p_in] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(Self { p_circuit, p_in })
    }

    pub fn noiseless() -> Self {
        Self {
            p_circuit: 0.0,
            p_in: 0.0,
        }
    }
}

type Expr = Option<Vec<usize>>;

fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn xor_expr(a: &Expr, b: &Expr) -> Expr {
    match (a, b) {
        (Some(a), Some(b)) => Some(xor_sorted(a, b)),
        _ => None,
    }
}

struct PatchState {
    x: Vec<Expr>,
    z: Vec<Expr>,
}

impl PatchState {
    fn exprs(&mut self, basis: Basis) -> &mut Vec<Expr> {
        match basis {
            Basis::X => &mut self.x,
            Basis::Z => &mut self.z,
        }
    }
}

/// Stateful circuit builder over equal-distance patches.
pub struct CircuitBuilder {
    layout: PatchLayout,
    circuit: Circuit,
    states: Vec<PatchState>,
    p: f64,
}

impl CircuitBuilder {
    pub fn new(distance: usize, p_circuit: f64) -> Result<Self> {
        NoiseModel::new(p_circuit, 0.0)?;
        Ok(Self {
            layout: build_patch(distance)?,
            circuit: Circuit::new(),
            states: Vec::new(),
            p: p_circuit,
        })
    }

    pub fn layout(&self) -> &PatchLayout {
        &self.layout
    }

    pub fn add_patch(&mut self, role: PatchRole) -> usize {
        let idx = self
            .circuit
            .add_patch(role, self.layout.distance, self.layout.num_qubits());
        self.states.push(PatchState {
            x: vec![None; self.layout.x_plaquettes.len()],
            z: vec![None; self.layout.z_plaquettes.len()],
        });
        idx
    }

    fn data_qubits(&self, patch: usize) -> impl Iterator<Item = usize> {
        let first = self.circuit.patches()[patch].first_qubit;
        first..first + self.layout.num_data()
    }

    fn ancilla(&self, patch: usize, basis: Basis, k: usize) -> usize {
        let base = self.circuit.patches()[patch].first_qubit + self.layout.num_data();
        match basis {
            Basis::X => base + k,
            Basis::Z => base + self.layout.x_plaquettes.len() + k,
        }
    }

    fn push(&mut self, inst: Instruction) -> Result<()> {
        self.circuit.push(inst)
    }

    fn noise1(&mut self, mut targets: Vec<usize>) -> Result<()> {
        if self.p > 0.0 && !targets.is_empty() {
            targets.sort_unstable();
            self.push(Instruction::Depolarize1 { p: self.p, targets })?;
        }
        Ok(())
    }

    fn reset_grouped(&mut self, by_basis: [Vec<usize>; 2]) -> Result<()> {
        let [z, x] = by_basis;
        if !z.is_empty() {
            self.push(Instruction::Reset {
                basis: Basis::Z,
                targets: z,
            })?;
        }
        if !x.is_empty() {
            self.push(Instruction::Reset {
                basis: Basis::X,
                targets: x,
            })?;
        }
        Ok(())
    }

    /// One syndrome-extraction round on `live` patches, optionally resetting
    /// the data qubits of some of them in the same time step.
    pub fn se_round(&mut self, live: &[usize], data_resets: &[(usize, Basis)]) -> Result<()> {
        let nx = self.layout.x_plaquettes.len();
        let nz = self.layout.z_plaquettes.len();

        // reset step
        let mut resets = [Vec::new(), Vec::new()];
        let mut idle = Vec::new();
        for &patch in live {
            let reset = data_resets
                .iter()
                .find(|(p, _)| *p == patch)
                .map(|&(_, b)| b);
            match reset {
                Some(Basis::Z) => resets[0].extend(self.data_qubits(patch)),
                Some(Basis::X) => resets[1].extend(self.data_qubits(patch)),
                None => idle.extend(self.data_qubits(patch)),
            }
            resets[0].extend((0..nz).map(|k| self.ancilla(patch, Basis::Z, k)));
            resets[1].extend((0..nx).map(|k| self.ancilla(patch, Basis::X, k)));
            if let Some(b) = reset {
                let st = &mut self.states[patch];
                *st.exprs(b) = vec![Some(Vec::new()); st.exprs(b).len()];
                let other = match b {
                    Basis::X => Basis::Z,
                    Basis::Z => Basis::X,
                };
                *st.exprs(other) = vec![None; st.exprs(other).len()];
            }
        }
        let mut noisy: Vec<usize> = resets.iter().flatten().copied().collect();
        noisy.extend(&idle);
        self.reset_grouped(resets)?;
        self.noise1(noisy)?;
        self.push(Instruction::Tick)?;

        // four CNOT layers
        for layer in 0..4 {
            let mut pairs = Vec::new();
            let mut busy = Vec::new();
            for &patch in live {
                for basis in [Basis::X, Basis::Z] {
                    for (k, plaq) in self.layout.plaquettes_of(basis).iter().enumerate() {
                        let Some(local) = plaq.schedule[layer] else {
                            continue;
                        };
                        let data = self.circuit.patches()[patch].data_qubit(local);
                        let anc = self.ancilla(patch, basis, k);
                        pairs.push(match basis {
                            Basis::X => (anc, data),
                            Basis::Z => (data, anc),
                        });
                        busy.push(data);
                        busy.push(anc);
                    }
                }
            }
            busy.sort_unstable();
            let idle: Vec<usize> = live
                .iter()
                .flat_map(|&patch| {
                    let info = &self.circuit.patches()[patch];
                    info.first_qubit..info.first_qubit + info.num_qubits
                })
                .filter(|q| busy.binary_search(q).is_err())
                .collect();
            self.push(Instruction::Cx {
                pairs: pairs.clone(),
            })?;
            if self.p > 0.0 {
                self.push(Instruction::Depolarize2 { p: self.p, pairs })?;
            }
            self.noise1(idle)?;
            self.push(Instruction::Tick)?;
        }

        // measurement step
        let first_meas = self.circuit.num_measurements();
        let x_anc: Vec<usize> = live
            .iter()
            .flat_map(|&patch| (0..nx).map(move |k| (patch, k)))
            .map(|(patch, k)| self.ancilla(patch, Basis::X, k))
            .collect();
        let z_anc: Vec<usize> = live
            .iter()
            .flat_map(|&patch| (0..nz).map(move |k| (patch, k)))
            .map(|(patch, k)| self.ancilla(patch, Basis::Z, k))
            .collect();
        let n_x = x_anc.len();
        self.push(Instruction::Measure {
            basis: Basis::X,
            flip: self.p,
            targets: x_anc,
        })?;
        self.push(Instruction::Measure {
            basis: Basis::Z,
            flip: self.p,
            targets: z_anc,
        })?;
        let idle_data: Vec<usize> = live.iter().flat_map(|&p| self.data_qubits(p)).collect();
        self.noise1(idle_data)?;
        self.push(Instruction::Tick)?;

        for (slot, &patch) in live.iter().enumerate() {
            for basis in [Basis::X, Basis::Z] {
                let (count, offset) = match basis {
                    Basis::X => (nx, first_meas + slot * nx),
                    Basis::Z => (nz, first_meas + n_x + slot * nz),
                };
                for k in 0..count {
                    let m = offset + k;
                    let prev = self.states[patch].exprs(basis)[k].replace(vec![m]);
                    if let Some(prev) = prev {
                        let meas = xor_sorted(&prev, &[m]);
                        self.push(Instruction::Detector { patch, basis, meas })?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Noiseless, instantaneous transversal CNOT between two patches.
    pub fn transversal_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.circuit
            .push_transversal_cnot(control, target, self.layout.num_data())?;
        for k in 0..self.layout.x_plaquettes.len() {
            let t = self.states[target].x[k].clone();
            let c = &mut self.states[control].x[k];
            *c = xor_expr(c, &t);
        }
        for k in 0..self.layout.z_plaquettes.len() {
            let c = self.states[control].z[k].clone();
            let t = &mut self.states[target].z[k];
            *t = xor_expr(t, &c);
        }
        Ok(())
    }

    /// Prepares each patch in logical `|−⟩` (data reset in X, then a Z̄
    /// chain) and applies a logical Z with the paired probability.
    pub fn prepare_minus(&mut self, patches: &[(usize, f64)]) -> Result<()> {
        let targets: Vec<usize> = patches
            .iter()
            .flat_map(|&(p, _)| self.data_qubits(p))
            .collect();
        self.push(Instruction::Reset {
            basis: Basis::X,
            targets: targets.clone(),
        })?;
        self.noise1(targets)?;
        let chains: Vec<Vec<usize>> = patches
            .iter()
            .map(|&(p, _)| {
                let info = &self.circuit.patches()[p];
                self.layout
                    .logical_z_support
                    .iter()
                    .map(|&q| info.data_qubit(q))
                    .collect()
            })
            .collect();
        self.push(Instruction::Gate {
            kind: GateKind::Z,
            targets: chains.concat(),
        })?;
        for (&(p, p_in), chain) in patches.iter().zip(chains) {
            NoiseModel::new(0.0, p_in)?;
            if p_in > 0.0 {
                self.push(Instruction::LogicalZError {
                    p: p_in,
                    targets: chain,
                })?;
            }
            let st = &mut self.states[p];
            st.x = vec![Some(Vec::new()); st.x.len()];
            st.z = vec![None; st.z.len()];
        }
        self.push(Instruction::Tick)
    }

    /// Transversal data measurement; returns, per patch, the measurement
    /// index of each data qubit. Closes all known plaquettes of `basis`.
    pub fn measure_data(&mut self, patches: &[usize], basis: Basis) -> Result<Vec<Vec<usize>>> {
        let first = self.circuit.num_measurements();
        let n = self.layout.num_data();
        let targets: Vec<usize> = patches.iter().flat_map(|&p| self.data_qubits(p)).collect();
        self.push(Instruction::Measure {
            basis,
            flip: self.p,
            targets,
        })?;
        let records: Vec<Vec<usize>> = (0..patches.len())
            .map(|slot| (first + slot * n..first + (slot + 1) * n).collect())
            .collect();
        for (&patch, rec) in patches.iter().zip(&records) {
            let plaqs = self.layout.plaquettes_of(basis).to_vec();
            for (k, plaq) in plaqs.iter().enumerate() {
                let Some(prev) = self.states[patch].exprs(basis)[k].take() else {
                    continue;
                };
                let support: Vec<usize> = plaq.support().iter().map(|&q| rec[q]).collect();
                let meas = xor_sorted(&prev, &support);
                self.push(Instruction::Detector { patch, basis, meas })?;
            }
            let st = &mut self.states[patch];
            st.x.iter_mut()
                .chain(st.z.iter_mut())
                .for_each(|e| *e = None);
        }
        Ok(records)
    }

    /// Measurement indices realizing the logical readout of one patch.
    pub fn logical_readout(&self, record: &[usize], basis: Basis) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .layout
            .logical_support(basis)
            .iter()
            .map(|&q| record[q])
            .collect();
        v.sort_unstable();
        v
    }

    pub fn annotate(&mut self, inst: Instruction) -> Result<()> {
        self.push(inst)
    }

    pub fn finish(self) -> Circuit {
        self.circuit
    }
}

fn xor_all<'a>(sets: impl IntoIterator<Item = &'a Vec<usize>>) -> Vec<usize> {
    sets.into_iter()
        .fold(Vec::new(), |acc, s| xor_sorted(&acc, s))
}

/// Builds the data patches, the initialization round and every CNOT group
/// with its following round. Returns the data patch ids.
fn build_cnot_network(b: &mut CircuitBuilder, spec: &ProtocolSpec) -> Result<Vec<usize>> {
    let data: Vec<usize> = (0..spec.num_data)
        .map(|j| b.add_patch(PatchRole::Data(j)))
        .collect();
    let resets: Vec<(usize, Basis)> = data.iter().map(|&p| (p, spec.init_basis[p])).collect();
    b.se_round(&data, &resets)?;
    for group in &spec.cnot_layers {
        for sub in group {
            for &(c, t) in sub {
                b.transversal_cnot(data[c], data[t])?;
            }
        }
        b.se_round(&data, &[])?;
    }
    Ok(data)
}

fn validate_spec(spec: &ProtocolSpec) -> Result<()> {
    let ok = spec.init_basis.len() == spec.num_data
        && spec
            .cnots()
            .all(|(c, t)| c < spec.num_data && t < spec.num_data && c != t)
        && spec
            .consumption
            .iter()
            .all(|&(j, r)| j < spec.num_data && r < spec.num_resources());
    if ok {
        Ok(())
    } else {
        Err(Error::Config("inconsistent protocol description".into()))
    }
}

/// Full surface-code distillation circuit with a uniform injection rate.
pub fn build_distillation_circuit(
    spec: &ProtocolSpec,
    d: usize,
    noise: NoiseModel,
) -> Result<Circuit> {
    let p_in = vec![noise.p_in; spec.num_resources()];
    build_distillation_circuit_with_injection(spec, d, noise.p_circuit, &p_in)
}

/// As [`build_distillation_circuit`] with a separate injection probability
/// per resource; `1.0`/`0.0` entries give deterministic error patterns.
pub fn build_distillation_circuit_with_injection(
    spec: &ProtocolSpec,
    d: usize,
    p_circuit: f64,
    p_in: &[f64],
) -> Result<Circuit> {
    validate_spec(spec)?;
    if p_in.len() != spec.num_resources() {
        return Err(Error::LengthMismatch {
            left: p_in.len(),
            right: spec.num_resources(),
        });
    }
    let mut b = CircuitBuilder::new(d, p_circuit)?;
    let data = build_cnot_network(&mut b, spec)?;
    let resources: Vec<usize> = (0..spec.num_resources())
        .map(|r| b.add_patch(PatchRole::Resource(r)))
        .collect();
    let prep: Vec<(usize, f64)> = resources
        .iter()
        .copied()
        .zip(p_in.iter().copied())
        .collect();
    b.prepare_minus(&prep)?;
    for &(j, r) in &spec.consumption {
        b.transversal_cnot(data[j], resources[r])?;
    }
    let all: Vec<usize> = data.iter().chain(&resources).copied().collect();
    b.se_round(&all, &[])?;
    let records = b.measure_data(&all, Basis::X)?;
    let readout: Vec<Vec<usize>> = records
        .iter()
        .map(|r| b.logical_readout(r, Basis::X))
        .collect();
    let data_readout = |j: usize| &readout[j];
    let resource_readout = |r: usize| &readout[spec.num_data + r];

    for (id, check) in spec.checks.iter().enumerate() {
        let meas = xor_all(check.iter().map(|&j| data_readout(j)));
        b.annotate(Instruction::Check { id, meas })?;
    }
    let mut output = data_readout(0).clone();
    for &j in &spec.output_support {
        output = xor_sorted(&output, data_readout(j));
    }
    b.annotate(Instruction::Observable {
        id: 0,
        meas: output,
    })?;
    let rule = &spec.frame_rule;
    let mut frame = xor_all(rule.data.iter().map(|&j| data_readout(j)));
    if rule.include_resources {
        for r in 0..spec.num_resources() {
            frame = xor_sorted(&frame, resource_readout(r));
        }
    }
    b.annotate(Instruction::Frame { meas: frame })?;
    Ok(b.finish())
}

/// Single-patch memory experiment in the Z basis.
pub fn build_memory_circuit(d: usize, rounds: usize, noise: NoiseModel) -> Result<Circuit> {
    build_memory_circuit_in_basis(d, rounds, noise, Basis::Z)
}

pub fn build_memory_circuit_in_basis(
    d: usize,
    rounds: usize,
    noise: NoiseModel,
    basis: Basis,
) -> Result<Circuit> {
    if rounds == 0 {
        return Err(Error::Config(
            "memory experiment needs at least one round".into(),
        ));
    }
    let mut b = CircuitBuilder::new(d, noise.p_circuit)?;
    let patch = b.add_patch(PatchRole::Memory);
    b.se_round(&[patch], &[(patch, basis)])?;
    for _ in 1..rounds {
        b.se_round(&[patch], &[])?;
    }
    let records = b.measure_data(&[patch], basis)?;
    let meas = b.logical_readout(&records[0], basis);
    b.annotate(Instruction::Observable { id: 0, meas })?;
    Ok(b.finish())
}

/// Patches whose logical operator of type `basis` the CNOT network maps
/// the initial logical of `patch` onto (X spreads control to target, Z
/// spreads target to control).
pub fn flow_image(spec: &ProtocolSpec, patch: usize, basis: Basis) -> Vec<usize> {
    let mut set = vec![false; spec.num_data];
    set[patch] = true;
    for (c, t) in spec.cnots() {
        match basis {
            Basis::X if set[c] => set[t] ^= true,
            Basis::Z if set[t] => set[c] ^= true,
            _ => {}
        }
    }
    (0..spec.num_data).filter(|&j| set[j]).collect()
}

/// Patches initialized in `basis`, in order; observable `i` of the
/// sub-circuit experiment measured in `basis` belongs to entry `i`.
pub fn subcircuit_observable_patches(spec: &ProtocolSpec, basis: Basis) -> Vec<usize> {
    (0..spec.num_data)
        .filter(|&j| spec.init_basis[j] == basis)
        .collect()
}

/// The CNOT network with one round per barrier on every data patch, closed
/// by transversal measurement of all patches in `final_basis`.
///
/// One observable is emitted per patch initialized in `final_basis`: the
/// forward image of its initial logical, which is deterministic. Running
/// both bases covers every patch once.
pub fn build_cnot_subcircuit_experiment(
    spec: &ProtocolSpec,
    d: usize,
    noise: NoiseModel,
    final_basis: Basis,
) -> Result<Circuit> {
    validate_spec(spec)?;
    let mut b = CircuitBuilder::new(d, noise.p_circuit)?;
    let data = build_cnot_network(&mut b, spec)?;
    // round at the final barrier, consumption removed
    b.se_round(&data, &[])?;
    let records = b.measure_data(&data, final_basis)?;
    for (id, patch) in subcircuit_observable_patches(spec, final_basis)
        .into_iter()
        .enumerate()
    {
        let image = flow_image(spec, patch, final_basis);
        let meas = xor_all(
            image
                .iter()
                .map(|&j| b.logical_readout(&records[j], final_basis))
                .collect::<Vec<_>>()
                .iter(),
        );
        b.annotate(Instruction::Observable { id, meas })?;
    }
    Ok(b.finish())
}

/// Rounds in the sub-circuit experiment, for matching memory baselines.
pub fn subcircuit_rounds(spec: &ProtocolSpec) -> usize {
    spec.num_barriers()
}
