//! Minimum-weight perfect matching of defects on a patch graph, with the
//! boundary reachable by every defect.

use super::blossom::max_weight_matching;
use super::graph::{MatchingGraph, UNREACHABLE};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Correction {
    /// Graph edges used an odd number of times, ascending.
    pub edges: Vec<usize>,
    /// Total weight of the matched pairs.
    pub weight: i64,
}

impl Correction {
    pub fn observables(&self, g: &MatchingGraph) -> u64 {
        self.edges
            .iter()
            .fold(0, |acc, &e| acc ^ g.edges[e].observables)
    }

    pub fn checks(&self, g: &MatchingGraph) -> u64 {
        self.edges.iter().fold(0, |acc, &e| acc ^ g.edges[e].checks)
    }
}

/// Pairs of defect positions (`None` is the boundary) in a minimum-weight
/// matching.
pub fn match_defects(g: &MatchingGraph, defects: &[usize]) -> Result<Vec<(usize, Option<usize>)>> {
    let k = defects.len();
    let fail = || {
        Error::DecodeFailure(format!(
            "no perfect matching for {k} defects in patch {}",
            g.patch
        ))
    };
    match k {
        0 => return Ok(Vec::new()),
        1 => {
            return if g.distance(defects[0], None) < UNREACHABLE {
                Ok(vec![(0, None)])
            } else {
                Err(fail())
            };
        }
        2 => {
            let pair = g.distance(defects[0], Some(defects[1]));
            let split = g
                .distance(defects[0], None)
                .saturating_add(g.distance(defects[1], None));
            return if pair >= UNREACHABLE && split >= UNREACHABLE {
                Err(fail())
            } else if pair <= split {
                Ok(vec![(0, Some(1))])
            } else {
                Ok(vec![(0, None), (1, None)])
            };
        }
        _ => {}
    }
    let mut costs = Vec::new();
    for i in 0..k {
        let b = g.distance(defects[i], None);
        if b < UNREACHABLE {
            costs.push((i, k + i, b));
        }
        for j in i + 1..k {
            let d = g.distance(defects[i], Some(defects[j]));
            if d < UNREACHABLE {
                costs.push((i, j, d));
            }
        }
    }
    let big = costs.iter().map(|c| c.2).max().unwrap_or(0) + 1;
    let mut edges: Vec<(usize, usize, i64)> =
        costs.iter().map(|&(i, j, w)| (i, j, big - w)).collect();
    for i in 0..k {
        for j in i + 1..k {
            edges.push((k + i, k + j, big));
        }
    }
    let mate = max_weight_matching(2 * k, &edges, true);
    let mut pairs = Vec::with_capacity(k);
    for (i, &m) in mate.iter().take(k).enumerate() {
        match m {
            Some(j) if j < k => {
                if i < j {
                    pairs.push((i, Some(j)));
                }
            }
            Some(j) if j == k + i => pairs.push((i, None)),
            _ => return Err(fail()),
        }
    }
    Ok(pairs)
}

/// Decodes local `defects` (node indices) into a set of graph edges.
pub fn mwpm_decode(g: &MatchingGraph, defects: &[usize]) -> Result<Correction> {
    let pairs = match_defects(g, defects)?;
    let mut edges = Vec::new();
    let mut weight = 0;
    for (i, j) in pairs {
        let t = j.map(|j| defects[j]);
        weight += g.distance(defects[i], t);
        edges.extend(g.path(defects[i], t));
    }
    edges.sort_unstable();
    let mut odd = Vec::with_capacity(edges.len());
    for e in edges {
        if odd.last() == Some(&e) {
            odd.pop();
        } else {
            odd.push(e);
        }
    }
    Ok(Correction { edges: odd, weight })
}

/// Exhaustive minimum over all pairings, used as a test oracle.
pub fn brute_force_weight(g: &MatchingGraph, defects: &[usize]) -> Option<i64> {
    let k = defects.len();
    let mut best = vec![UNREACHABLE; 1 << k];
    best[0] = 0;
    for mask in 1usize..1 << k {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut v = best[rest].saturating_add(g.distance(defects[i], None));
        let mut others = rest;
        while others != 0 {
            let j = others.trailing_zeros() as usize;
            others &= others - 1;
            let cand =
                best[rest & !(1 << j)].saturating_add(g.distance(defects[i], Some(defects[j])));
            v = v.min(cand);
        }
        best[mask] = v.min(UNREACHABLE);
    }
    let w = best[(1 << k) - 1];
    (w < UNREACHABLE).then_some(w)
}

#[cfg(test)]
mod tests {
    use super::super::graph::graph_from_edges;
    use super::*;

    #[test]
    fn empty_syndrome_gives_empty_correction() {
        let g = graph_from_edges(
            3,
            &[(0, Some(1), 5), (1, Some(2), 5), (0, None, 9), (2, None, 9)],
        );
        assert_eq!(mwpm_decode(&g, &[]).unwrap(), Correction::default());
    }

    #[test]
    fn adjacent_defects_use_the_edge_between_them() {
        let g = graph_from_edges(
            3,
            &[(0, Some(1), 5), (1, Some(2), 5), (0, None, 9), (2, None, 9)],
        );
        let c = mwpm_decode(&g, &[1, 2]).unwrap();
        assert_eq!(c.edges, vec![1]);
        assert_eq!(c.weight, 5);
        let c = mwpm_decode(&g, &[0, 2]).unwrap();
        assert_eq!(c.weight, 10);
        assert_eq!(c.edges, vec![0, 1]);
    }

    #[test]
    fn far_defects_prefer_boundary() {
        let g = graph_from_edges(
            4,
            &[
                (0, Some(1), 4),
                (1, Some(2), 4),
                (2, Some(3), 4),
                (0, None, 1),
                (3, None, 1),
            ],
        );
        let c = mwpm_decode(&g, &[0, 3]).unwrap();
        assert_eq!(c.weight, 2);
        assert_eq!(c.edges, vec![3, 4]);
    }

    #[test]
    fn four_defects_match_brute_force() {
        let g = graph_from_edges(
            5,
            &[
                (0, Some(1), 3),
                (1, Some(2), 2),
                (2, Some(3), 7),
                (3, Some(4), 1),
                (0, None, 6),
                (4, None, 2),
            ],
        );
        let defects = [0, 1, 2, 4];
        let c = mwpm_decode(&g, &defects).unwrap();
        assert_eq!(Some(c.weight), brute_force_weight(&g, &defects));
    }

    #[test]
    fn isolated_defect_fails() {
        let g = graph_from_edges(2, &[]);
        assert!(matches!(
            mwpm_decode(&g, &[0]),
            Err(Error::DecodeFailure(_))
        ));
    }
}
