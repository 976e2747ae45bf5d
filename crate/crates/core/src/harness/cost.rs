use crate::protocols::{build_protocol, ProtocolKind};

/// Qubit-cycles of one distillation round: every data patch lives for one
/// cycle per barrier and every resource patch for a single cycle.
pub fn qubit_cycles(kind: ProtocolKind, d: u64) -> u64 {
    let spec = build_protocol(kind);
    let per_patch = d * d;
    (spec.num_data * spec.num_barriers() + spec.num_resources()) as u64 * per_patch
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles() {
        assert_eq!(qubit_cycles(ProtocolKind::SevenToOne, 3), 423);
        assert_eq!(qubit_cycles(ProtocolKind::FifteenToOne, 3), 999);
        assert_eq!(qubit_cycles(ProtocolKind::SevenToOne, 1), 47);
    }
}
