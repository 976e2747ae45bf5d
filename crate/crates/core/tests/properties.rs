use distill_core::decoder::{brute_force_weight, graph_from_edges, mwpm_decode};
use distill_core::pauli::{conjugate, CliffordGate, PauliString, StabilizerTableau};
use proptest::prelude::*;

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(0u8..4, n), any::<bool>()).prop_map(|(ops, neg)| {
        let body: String = ops
            .iter()
            .map(|&o| ['I', 'X', 'Y', 'Z'][o as usize])
            .collect();
        PauliString::parse(&format!("{}{body}", if neg { "-" } else { "" })).unwrap()
    })
}

fn gate(n: usize) -> impl Strategy<Value = CliffordGate> {
    (0u8..5, 0..n, 1..n).prop_map(move |(k, a, off)| match k {
        0 => CliffordGate::h(a),
        1 => CliffordGate::s(a),
        2 => CliffordGate::x(a),
        3 => CliffordGate::z(a),
        _ => CliffordGate::cnot(a, (a + off) % n),
    })
}

proptest! {
    #[test]
    fn conjugation_preserves_commutation(a in pauli(5), b in pauli(5), gs in prop::collection::vec(gate(5), 1..12)) {
        let before = a.commutes(&b).unwrap();
        let (mut ca, mut cb) = (a.clone(), b.clone());
        for g in &gs {
            ca = conjugate(g, &ca).unwrap();
            cb = conjugate(g, &cb).unwrap();
        }
        prop_assert_eq!(ca.commutes(&cb).unwrap(), before);
        prop_assert_eq!(ca.weight() == 0, a.weight() == 0);
    }

    #[test]
    fn conjugation_is_multiplicative(a in pauli(4), b in pauli(4), g in gate(4)) {
        let lhs = conjugate(&g, &a.multiply(&b).unwrap()).unwrap();
        let rhs = conjugate(&g, &a).unwrap().multiply(&conjugate(&g, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn products_commute_up_to_sign(a in pauli(6), b in pauli(6)) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        prop_assert_eq!(ab.x_bits(), ba.x_bits());
        prop_assert_eq!(ab.z_bits(), ba.z_bits());
        let same = ab.phase() == ba.phase();
        prop_assert_eq!(same, a.commutes(&b).unwrap());
    }

    /// Tableau stabilizers follow the Heisenberg picture of the initial Z_i.
    #[test]
    fn tableau_tracks_conjugated_stabilizers(gs in prop::collection::vec(gate(4), 0..20)) {
        let mut t = StabilizerTableau::new(4);
        let mut expected: Vec<PauliString> = (0..4).map(|q| PauliString::z_on(4, [q])).collect();
        for g in &gs {
            t.apply(g).unwrap();
            for e in &mut expected {
                *e = conjugate(g, e).unwrap();
            }
        }
        prop_assert!(t.is_consistent());
        for e in &expected {
            prop_assert_eq!(t.group_contains(e).unwrap(), Some(1));
        }
    }

    #[test]
    fn matching_weight_is_optimal(
        n in 2usize..10,
        raw in prop::collection::vec((0usize..10, 0usize..11, 1i64..50), 4..30),
        mask in any::<u16>(),
    ) {
        // node index n stands for the boundary
        let mut edges = Vec::new();
        for (a, b, w) in raw {
            let (a, b) = (a % n, b % (n + 1));
            if a == b {
                continue;
            }
            edges.push((a, if b == n { None } else { Some(b) }, w));
        }
        for v in 0..n {
            edges.push((v, None, 60 + v as i64));
        }
        let g = graph_from_edges(n, &edges);
        let defects: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        let got = mwpm_decode(&g, &defects).unwrap();
        prop_assert_eq!(Some(got.weight), brute_force_weight(&g, &defects));
    }
}
