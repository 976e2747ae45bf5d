//! Matching decoders: per-patch MWPM and the iterative multi-patch loop.

mod blossom;
mod graph;
mod iterative;
mod mwpm;

pub use blossom::max_weight_matching;
pub use graph::{
    build_matching_graph, graph_from_edges, part_home, weight_for, GraphEdge, MatchingGraph,
    UNREACHABLE,
};
pub use iterative::{predict_outcome, DecodeResult, IterativeConfig, IterativeDecoder, Outcome};
pub use mwpm::{brute_force_weight, match_defects, mwpm_decode, Correction};
