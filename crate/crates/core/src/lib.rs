//! Exact frustration-index computation for signed networks.
//!
//! The frustration index of a signed graph is the minimum number of edges
//! whose removal (equivalently, negation) makes the graph balanced. This
//! crate computes it exactly by formulating the minimum frustration count
//! as a 0/1 linear program in three equivalent ways (AND, XOR, ABS) and
//! solving with a built-in LP-based branch-and-bound engine. Speed-ups:
//! fixing the colour of the highest-degree node, degree-priority branching,
//! and unbalanced-triangle valid inequalities (upfront or lazily separated).
//!
//! Weighted and multi-colour extensions of the model are included, along
//! with brute-force oracles, random generators, preprocessing by pendant
//! stripping and biconnected decomposition, edge-list I/O, LP-format export,
//! and a benchmark sweep harness.

pub mod bnb;
pub mod export;
pub mod generate;
pub mod graph;
pub mod io;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod samples;
pub mod sweep;

pub use graph::{
    frustration_count, weighted_frustration, Balance, Colouring, Edge, FrustrationSummary,
    GraphError, NodeId, SignedGraph,
};
