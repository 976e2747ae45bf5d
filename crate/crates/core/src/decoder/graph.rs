//! Per-patch matching graphs built from the decomposed error model.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::circuit::{Circuit, ErrorMechanism};
use crate::error::{Error, Result};

/// Fixed-point scale for log-likelihood weights.
pub const WEIGHT_SCALE: f64 = 1024.0;

pub const UNREACHABLE: i64 = i64::MAX / 4;

#[derive(Clone, Debug, PartialEq)]
pub struct GraphEdge {
    /// Local node indices; `None` is the boundary.
    pub a: usize,
    pub b: Option<usize>,
    /// Combined probability of every part mapped to this edge.
    pub probability: f64,
    pub weight: i64,
    /// Most likely contributing mechanism (lowest id on ties).
    pub mechanism: usize,
    pub observables: u64,
    pub checks: u64,
    pub frame: bool,
    /// Detectors of other patches flipped by the representative part.
    pub foreign: Vec<usize>,
    representative_probability: f64,
}

#[derive(Clone, Debug)]
pub struct MatchingGraph {
    pub patch: usize,
    /// Global detector id of each local node.
    pub nodes: Vec<usize>,
    pub edges: Vec<GraphEdge>,
    adjacency: Vec<Vec<usize>>,
    boundary_edges: Vec<usize>,
    /// `dist[s * (n + 1) + t]` with `t == n` the boundary.
    dist: Vec<i64>,
    /// Last edge on the shortest path from `s` to `t`.
    pred: Vec<u32>,
}

pub fn weight_for(q: f64) -> i64 {
    if q <= 0.0 {
        return UNREACHABLE;
    }
    let w = ((1.0 - q) / q).ln().max(0.0);
    (w * WEIGHT_SCALE).round() as i64
}

/// Home patch of a mechanism part: the mechanism's own patch when the part
/// flips any detector there, else the patch of its first detector.
pub fn part_home(
    circuit: &Circuit,
    mechanism: &ErrorMechanism,
    detectors: &[usize],
) -> Option<usize> {
    let dets = circuit.detectors();
    if detectors
        .iter()
        .any(|&d| dets[d].patch == mechanism.home_patch)
    {
        Some(mechanism.home_patch)
    } else {
        detectors.first().map(|&d| dets[d].patch)
    }
}

impl MatchingGraph {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn boundary_edges(&self) -> &[usize] {
        &self.boundary_edges
    }

    /// Shortest-path distance; `None` for the boundary.
    pub fn distance(&self, s: usize, t: Option<usize>) -> i64 {
        let n = self.nodes.len();
        self.dist[s * (n + 1) + t.unwrap_or(n)]
    }

    /// Edges on the shortest path between `s` and `t`.
    pub fn path(&self, s: usize, t: Option<usize>) -> Vec<usize> {
        let n = self.nodes.len();
        let mut out = Vec::new();
        let mut cur = t.unwrap_or(n);
        while cur != s {
            let e = self.pred[s * (n + 1) + cur];
            if e == u32::MAX {
                return Vec::new();
            }
            let edge = &self.edges[e as usize];
            out.push(e as usize);
            let other = match edge.b {
                None => edge.a,
                Some(b) if edge.a == cur => b,
                Some(_) => edge.a,
            };
            cur = other;
        }
        out
    }

    fn shortest_paths(&mut self) {
        let n = self.nodes.len();
        let stride = n + 1;
        self.dist = vec![UNREACHABLE; n * stride];
        self.pred = vec![u32::MAX; n * stride];
        let mut heap = BinaryHeap::new();
        for s in 0..n {
            let dist = &mut self.dist[s * stride..(s + 1) * stride];
            let pred = &mut self.pred[s * stride..(s + 1) * stride];
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] || u == n {
                    // the boundary is a sink, never a waypoint
                    continue;
                }
                for &e in &self.adjacency[u] {
                    let edge = &self.edges[e];
                    let v = match edge.b {
                        None => n,
                        Some(b) if b == u => edge.a,
                        Some(b) => b,
                    };
                    let nd = d + edge.weight;
                    if nd < dist[v] || (nd == dist[v] && (e as u32) < pred[v] && v != s) {
                        dist[v] = nd;
                        pred[v] = e as u32;
                        heap.push(Reverse((nd, v)));
                    }
                }
            }
        }
    }
}

/// Builds the graph of `patch` from mechanism parts homed there. Parts
/// without detectors (pure logical injections) carry no matching
/// information and are skipped.
pub fn build_matching_graph(
    circuit: &Circuit,
    mechanisms: &[ErrorMechanism],
    patch: usize,
) -> Result<MatchingGraph> {
    let dets = circuit.detectors();
    let nodes: Vec<usize> = (0..dets.len())
        .filter(|&d| dets[d].patch == patch)
        .collect();
    let local: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let mut edges: Vec<GraphEdge> = Vec::new();
    let mut by_key: HashMap<(usize, Option<usize>), usize> = HashMap::new();
    for m in mechanisms {
        for part in &m.parts {
            if part_home(circuit, m, &part.detectors) != Some(patch) {
                continue;
            }
            let (home, foreign): (Vec<usize>, Vec<usize>) = part
                .detectors
                .iter()
                .partition(|&&d| dets[d].patch == patch);
            let key = match home.as_slice() {
                [a] => (local[a], None),
                [a, b] => (local[a], Some(local[b])),
                _ => {
                    return Err(Error::NotMatchable {
                        mechanism: m.id,
                        patch,
                        count: home.len(),
                    })
                }
            };
            match by_key.get(&key) {
                Some(&e) => {
                    let edge = &mut edges[e];
                    let q = edge.probability;
                    edge.probability = q + m.probability - 2.0 * q * m.probability;
                    if m.probability > edge.representative_probability {
                        edge.representative_probability = m.probability;
                        edge.mechanism = m.id;
                        edge.observables = part.observables;
                        edge.checks = part.checks;
                        edge.frame = part.frame;
                        edge.foreign = foreign;
                    }
                }
                None => {
                    by_key.insert(key, edges.len());
                    edges.push(GraphEdge {
                        a: key.0,
                        b: key.1,
                        probability: m.probability,
                        weight: 0,
                        mechanism: m.id,
                        observables: part.observables,
                        checks: part.checks,
                        frame: part.frame,
                        foreign,
                        representative_probability: m.probability,
                    });
                }
            }
        }
    }
    let mut adjacency = vec![Vec::new(); nodes.len()];
    let mut boundary_edges = Vec::new();
    for (i, e) in edges.iter_mut().enumerate() {
        e.weight = weight_for(e.probability);
        adjacency[e.a].push(i);
        match e.b {
            Some(b) => adjacency[b].push(i),
            None => boundary_edges.push(i),
        }
    }
    let mut g = MatchingGraph {
        patch,
        nodes,
        edges,
        adjacency,
        boundary_edges,
        dist: Vec::new(),
        pred: Vec::new(),
    };
    g.shortest_paths();
    Ok(g)
}

/// Builds a graph directly from local edges, for tests and tools.
pub fn graph_from_edges(num_nodes: usize, edges: &[(usize, Option<usize>, i64)]) -> MatchingGraph {
    let mut adjacency = vec![Vec::new(); num_nodes];
    let mut boundary_edges = Vec::new();
    let edges: Vec<GraphEdge> = edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b, weight))| {
            adjacency[a].push(i);
            match b {
                Some(b) => adjacency[b].push(i),
                None => boundary_edges.push(i),
            }
            GraphEdge {
                a,
                b,
                probability: 0.0,
                weight,
                mechanism: i,
                observables: 0,
                checks: 0,
                frame: false,
                foreign: Vec::new(),
                representative_probability: 0.0,
            }
        })
        .collect();
    let mut g = MatchingGraph {
        patch: 0,
        nodes: (0..num_nodes).collect(),
        edges,
        adjacency,
        boundary_edges,
        dist: Vec::new(),
        pred: Vec::new(),
    };
    g.shortest_paths();
    g
}
