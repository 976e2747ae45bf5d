use distill_core::circuit::{
    build_cnot_subcircuit_experiment, build_distillation_circuit, build_memory_circuit_in_basis,
    enumerate_error_mechanisms, flow_image, Circuit, NoiseModel,
};
use distill_core::pauli::{Basis, CliffordGate, PauliString, StabilizerTableau};
use distill_core::protocols::{build_protocol, ProtocolKind};
use distill_core::sim::{parity, reference_measurements};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Runs the noiseless tableau several times with different random choices;
/// detectors must be zero every time and checks/observables constant.
fn assert_reference_sound(c: &Circuit) {
    let mut first: Option<(Vec<bool>, Vec<bool>)> = None;
    for seed in 0..4 {
        let bits = reference_measurements(c, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for (k, det) in c.detectors().iter().enumerate() {
            assert!(
                !parity(&bits, &det.meas),
                "detector {k} fired in noiseless run"
            );
        }
        let checks: Vec<bool> = c.checks().iter().map(|s| parity(&bits, s)).collect();
        let obs: Vec<bool> = c.observables().iter().map(|s| parity(&bits, s)).collect();
        match &first {
            None => first = Some((checks, obs)),
            Some((c0, o0)) => {
                assert_eq!(&checks, c0, "check parity is not deterministic");
                assert_eq!(&obs, o0, "observable parity is not deterministic");
            }
        }
    }
}

#[test]
fn memory_circuits_are_deterministic() {
    for basis in [Basis::X, Basis::Z] {
        for d in [3, 5] {
            let c = build_memory_circuit_in_basis(d, 3, NoiseModel::noiseless(), basis).unwrap();
            assert_reference_sound(&c);
        }
    }
}

#[test]
fn distillation_circuits_are_deterministic() {
    for kind in [ProtocolKind::SevenToOne, ProtocolKind::FifteenToOne] {
        let spec = build_protocol(kind);
        let c = build_distillation_circuit(&spec, 3, NoiseModel::noiseless()).unwrap();
        assert_reference_sound(&c);
    }
}

#[test]
fn subcircuit_experiments_are_deterministic() {
    let spec = build_protocol(ProtocolKind::SevenToOne);
    for basis in [Basis::X, Basis::Z] {
        let c = build_cnot_subcircuit_experiment(&spec, 3, NoiseModel::noiseless(), basis).unwrap();
        assert_eq!(c.observables().len(), 4);
        assert_reference_sound(&c);
    }
}

#[test]
fn flow_image_matches_tableau_conjugation() {
    for kind in [ProtocolKind::SevenToOne, ProtocolKind::FifteenToOne] {
        let spec = build_protocol(kind);
        let n = spec.num_data;
        for basis in [Basis::X, Basis::Z] {
            for patch in 0..n {
                let mut p = match basis {
                    Basis::X => PauliString::x_on(n, [patch]),
                    Basis::Z => PauliString::z_on(n, [patch]),
                };
                for (c, t) in spec.cnots() {
                    p = distill_core::pauli::conjugate(&CliffordGate::cnot(c, t), &p).unwrap();
                }
                let expected = match basis {
                    Basis::X => PauliString::x_on(n, flow_image(&spec, patch, basis)),
                    Basis::Z => PauliString::z_on(n, flow_image(&spec, patch, basis)),
                };
                assert_eq!(p, expected);
            }
        }
    }
}

#[test]
fn encoded_group_contains_forward_images() {
    // the forward image of every initial logical stabilizes the encoded state
    let spec = build_protocol(ProtocolKind::FifteenToOne);
    let t: StabilizerTableau = distill_core::protocols::LogicalSimulator::encoded_state(&spec);
    for patch in 0..spec.num_data {
        let b = spec.init_basis[patch];
        let img = flow_image(&spec, patch, b);
        let p = match b {
            Basis::X => PauliString::x_on(spec.num_data, img),
            Basis::Z => PauliString::z_on(spec.num_data, img),
        };
        assert_eq!(t.group_contains(&p).unwrap(), Some(1));
    }
}

#[test]
fn mechanism_parts_touch_at_most_two_detectors_per_patch() {
    for kind in [ProtocolKind::SevenToOne, ProtocolKind::FifteenToOne] {
        let spec = build_protocol(kind);
        let c =
            build_distillation_circuit(&spec, 3, NoiseModel::new(0.001, 0.05).unwrap()).unwrap();
        let dets = c.detectors();
        for m in enumerate_error_mechanisms(&c).unwrap() {
            for part in &m.parts {
                let home = part
                    .detectors
                    .iter()
                    .filter(|&&d| dets[d].patch == m.home_patch)
                    .count();
                assert!(home <= 2, "{kind:?} {m:?}");
                let bases: std::collections::BTreeSet<_> = part
                    .detectors
                    .iter()
                    .map(|&d| dets[d].basis as u8)
                    .collect();
                assert!(bases.len() <= 1, "mixed-basis part {m:?}");
            }
        }
    }
}
