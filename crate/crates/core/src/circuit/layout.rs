//! Rotated surface-code patch geometry.
//!
//! Data qubit `(col, row)` sits at lattice point `(2col+1, 2row+1)`; plaquette
//! ancillas sit on even points. X-type boundaries run along the top and
//! bottom edges, Z-type boundaries along the left and right edges.

use crate::error::{Error, Result};
use crate::pauli::{Basis, PauliString};

/// Corner slots in CNOT order: `[NW, NE, SW, SE]` offsets.
const CORNERS: [(i32, i32); 4] = [(-1, -1), (1, -1), (-1, 1), (1, 1)];
/// X plaquettes touch NW, NE, SW, SE; Z plaquettes touch NW, SW, NE, SE.
/// The final two data qubits of each ancilla form a pair perpendicular to the
/// logical operator of the same type, so hook errors do not reduce distance.
const X_ORDER: [usize; 4] = [0, 1, 2, 3];
const Z_ORDER: [usize; 4] = [0, 2, 1, 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plaquette {
    pub basis: Basis,
    pub ancilla_coord: (i32, i32),
    /// Data qubit touched at each of the four CNOT layers, if any.
    pub schedule: [Option<usize>; 4],
}

impl Plaquette {
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.schedule.iter().flatten().copied().collect();
        s.sort_unstable();
        s
    }

    pub fn weight(&self) -> usize {
        self.schedule.iter().flatten().count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchLayout {
    pub distance: usize,
    pub data_coords: Vec<(i32, i32)>,
    pub x_plaquettes: Vec<Plaquette>,
    pub z_plaquettes: Vec<Plaquette>,
    /// Vertical column joining the two X-type boundaries.
    pub logical_x_support: Vec<usize>,
    /// Horizontal row joining the two Z-type boundaries.
    pub logical_z_support: Vec<usize>,
}

impl PatchLayout {
    pub fn num_data(&self) -> usize {
        self.distance * self.distance
    }

    pub fn num_plaquettes(&self) -> usize {
        self.x_plaquettes.len() + self.z_plaquettes.len()
    }

    /// Data qubits followed by one ancilla per plaquette.
    pub fn num_qubits(&self) -> usize {
        self.num_data() + self.num_plaquettes()
    }

    /// X plaquettes first, then Z plaquettes.
    pub fn plaquettes(&self) -> impl Iterator<Item = &Plaquette> {
        self.x_plaquettes.iter().chain(&self.z_plaquettes)
    }

    pub fn plaquettes_of(&self, basis: Basis) -> &[Plaquette] {
        match basis {
            Basis::X => &self.x_plaquettes,
            Basis::Z => &self.z_plaquettes,
        }
    }

    pub fn logical_support(&self, basis: Basis) -> &[usize] {
        match basis {
            Basis::X => &self.logical_x_support,
            Basis::Z => &self.logical_z_support,
        }
    }

    fn pauli_on(&self, basis: Basis, support: &[usize]) -> PauliString {
        match basis {
            Basis::X => PauliString::x_on(self.num_data(), support.iter().copied()),
            Basis::Z => PauliString::z_on(self.num_data(), support.iter().copied()),
        }
    }

    pub fn stabilizer(&self, plaquette: &Plaquette) -> PauliString {
        self.pauli_on(plaquette.basis, &plaquette.support())
    }

    pub fn logical(&self, basis: Basis) -> PauliString {
        self.pauli_on(basis, self.logical_support(basis))
    }
}

pub fn build_patch(distance: usize) -> Result<PatchLayout> {
    if distance < 3 || distance.is_multiple_of(2) {
        return Err(Error::InvalidDistance(distance));
    }
    let d = distance as i32;
    let index_of = |x: i32, y: i32| -> Option<usize> {
        if x < 1 || y < 1 || x > 2 * d - 1 || y > 2 * d - 1 || x % 2 == 0 || y % 2 == 0 {
            None
        } else {
            Some((((y - 1) / 2) * d + (x - 1) / 2) as usize)
        }
    };
    let data_coords = (0..d)
        .flat_map(|row| (0..d).map(move |col| (2 * col + 1, 2 * row + 1)))
        .collect();

    let mut x_plaquettes = Vec::new();
    let mut z_plaquettes = Vec::new();
    for j in 0..=d {
        for i in 0..=d {
            let basis = if (i + j) % 2 == 0 { Basis::X } else { Basis::Z };
            let bulk = (1..d).contains(&i) && (1..d).contains(&j);
            let top_bottom = (j == 0 || j == d) && (1..d).contains(&i) && basis == Basis::X;
            let left_right = (i == 0 || i == d) && (1..d).contains(&j) && basis == Basis::Z;
            if !(bulk || top_bottom || left_right) {
                continue;
            }
            let (ax, ay) = (2 * i, 2 * j);
            let order = match basis {
                Basis::X => X_ORDER,
                Basis::Z => Z_ORDER,
            };
            let mut schedule = [None; 4];
            for (layer, &corner) in order.iter().enumerate() {
                let (dx, dy) = CORNERS[corner];
                schedule[layer] = index_of(ax + dx, ay + dy);
            }
            let plaq = Plaquette {
                basis,
                ancilla_coord: (ax, ay),
                schedule,
            };
            match basis {
                Basis::X => x_plaquettes.push(plaq),
                Basis::Z => z_plaquettes.push(plaq),
            }
        }
    }
    let logical_x_support = (0..distance).map(|row| row * distance).collect();
    let logical_z_support = (0..distance).collect();
    Ok(PatchLayout {
        distance,
        data_coords,
        x_plaquettes,
        z_plaquettes,
        logical_x_support,
        logical_z_support,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plaquette_counts() {
        let p3 = build_patch(3).unwrap();
        assert_eq!(p3.num_data(), 9);
        assert_eq!(p3.x_plaquettes.len(), 4);
        assert_eq!(p3.z_plaquettes.len(), 4);
        let p5 = build_patch(5).unwrap();
        assert_eq!(p5.num_data(), 25);
        assert_eq!(p5.num_plaquettes(), 24);
        assert!(p5.plaquettes().all(|p| p.weight() == 2 || p.weight() == 4));
    }

    #[test]
    fn even_or_small_distance_rejected() {
        for d in [0, 1, 2, 4, 6] {
            assert!(matches!(build_patch(d), Err(Error::InvalidDistance(_))));
        }
    }

    #[test]
    fn stabilizers_and_logicals_commute_correctly() {
        for d in [3, 5, 7] {
            let p = build_patch(d).unwrap();
            let stabs: Vec<_> = p.plaquettes().map(|q| p.stabilizer(q)).collect();
            for a in &stabs {
                for b in &stabs {
                    assert!(a.commutes(b).unwrap());
                }
            }
            let lx = p.logical(Basis::X);
            let lz = p.logical(Basis::Z);
            assert_eq!(lx.weight(), d);
            assert!(!lx.commutes(&lz).unwrap());
            for s in &stabs {
                assert!(lx.commutes(s).unwrap());
                assert!(lz.commutes(s).unwrap());
            }
        }
    }

    #[test]
    fn each_layer_touches_a_data_qubit_at_most_once() {
        let p = build_patch(5).unwrap();
        for layer in 0..4 {
            let mut seen = vec![false; p.num_data()];
            for q in p.plaquettes().filter_map(|pl| pl.schedule[layer]) {
                assert!(!seen[q], "data {q} twice in layer {layer}");
                seen[q] = true;
            }
        }
    }
}
