//! Surface-code circuits for distillation, memory and CNOT sub-circuit
//! experiments.

mod builder;
mod dem;
mod ir;
mod layout;

pub use builder::{
    build_cnot_subcircuit_experiment, build_distillation_circuit,
    build_distillation_circuit_with_injection, build_memory_circuit, build_memory_circuit_in_basis,
    flow_image, subcircuit_observable_patches, subcircuit_rounds, CircuitBuilder, NoiseModel,
};
pub use dem::{
    enumerate_error_mechanisms, ErrorMechanism, FaultLocation, MechanismPart, PauliTerm,
};
pub use ir::{Circuit, DetectorInfo, Instruction, PatchInfo, PatchRole, TransversalCnot};
pub use layout::{build_patch, PatchLayout, Plaquette};
