//! Small signed graphs used across the test suites and docs.

use crate::graph::SignedGraph;

/// Four nodes, two positive edges (0,1), (0,2) and three negative edges
/// (0,3), (1,2), (2,3). Frustration index 1, attained e.g. by colouring
/// node 3 alone.
pub fn mixed_four() -> SignedGraph {
    SignedGraph::new(4, &[(0, 1, 1), (0, 2, 1), (0, 3, -1), (1, 2, -1), (2, 3, -1)]).unwrap()
}

/// Four nodes, one positive edge (0,1) and four negative edges (0,2),
/// (0,3), (1,2), (2,3). Minimum frustration is 4 with one colour, 1 with
/// two colours, and 0 with three.
pub fn mostly_negative_four() -> SignedGraph {
    SignedGraph::new(4, &[(0, 1, 1), (0, 2, -1), (0, 3, -1), (1, 2, -1), (2, 3, -1)]).unwrap()
}

/// Complete graph on `n` nodes, every edge carrying `sign`.
pub fn complete(n: usize, sign: i8) -> SignedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v, sign));
        }
    }
    SignedGraph::new(n, &edges).unwrap()
}

/// All-negative complete graph on `n` nodes.
pub fn complete_negative(n: usize) -> SignedGraph {
    complete(n, -1)
}

/// Star with hub 0 and `leaves` leaves, all edges carrying `sign`.
pub fn star(leaves: usize, sign: i8) -> SignedGraph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v, sign)).collect();
    SignedGraph::new(leaves + 1, &edges).unwrap()
}
