//! Signed-graph data model and structural queries.
//!
//! A [`SignedGraph`] is a simple undirected graph whose edges carry a sign in
//! {-1, +1}, or, in weighted mode, a real weight in [-1, 1]. Node ids are
//! dense `0..n`; mapping of external labels to dense ids lives in [`crate::io`].

use std::fmt;

/// Dense node identifier in `0..n`.
pub type NodeId = usize;

/// An undirected signed edge with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    /// +1 or -1. For weighted graphs this is the sign of the weight
    /// (+1 for weight 0) and the weight itself lives in `SignedGraph::weights`.
    pub sign: i8,
}

/// Errors from graph construction and queries.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    SelfLoop { node: NodeId },
    DuplicateEdge { u: NodeId, v: NodeId },
    NodeOutOfRange { node: NodeId, n: usize },
    WeightOutOfRange { u: NodeId, v: NodeId, weight: f64 },
    InvalidSign { u: NodeId, v: NodeId, sign: i8 },
    ColouringLengthMismatch { expected: usize, got: usize },
    TooFewNodes { n: usize },
    WeightedGraph,
    UnweightedGraph,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::SelfLoop { node } => write!(f, "self-loop at node {node}"),
            GraphError::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u}, {v})"),
            GraphError::NodeOutOfRange { node, n } => {
                write!(f, "node id {node} out of range for n={n}")
            }
            GraphError::WeightOutOfRange { u, v, weight } => {
                write!(f, "edge ({u}, {v}) weight {weight} outside [-1, 1]")
            }
            GraphError::InvalidSign { u, v, sign } => {
                write!(f, "edge ({u}, {v}) sign {sign} is not +1 or -1")
            }
            GraphError::ColouringLengthMismatch { expected, got } => {
                write!(f, "colouring has {got} entries, graph has {expected} nodes")
            }
            GraphError::TooFewNodes { n } => write!(f, "operation requires n >= 2, got n={n}"),
            GraphError::WeightedGraph => write!(f, "operation requires an unweighted graph"),
            GraphError::UnweightedGraph => write!(f, "operation requires a weighted graph"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Simple undirected graph with signed (or weighted) edges.
///
/// Immutable after construction; all queries are pure.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedGraph {
    n: usize,
    edges: Vec<Edge>,
    weights: Option<Vec<f64>>,
    /// adjacency: per node, (neighbour, edge index), sorted by neighbour.
    adj: Vec<Vec<(NodeId, usize)>>,
}

impl SignedGraph {
    /// Build an unweighted signed graph from `(u, v, sign)` triples.
    ///
    /// Edges are normalised to `u < v`. Self-loops, duplicate (unordered)
    /// pairs, out-of-range endpoints and signs outside {-1, +1} are errors.
    pub fn new(n: usize, edges: &[(NodeId, NodeId, i8)]) -> Result<Self, GraphError> {
        let mut es = Vec::with_capacity(edges.len());
        for &(u, v, s) in edges {
            if s != 1 && s != -1 {
                return Err(GraphError::InvalidSign { u, v, sign: s });
            }
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            es.push(Edge { u, v, sign: s });
        }
        Self::build(n, es, None)
    }

    /// Build a weighted signed graph from `(u, v, weight)` triples with
    /// weights in [-1, 1].
    pub fn weighted(n: usize, edges: &[(NodeId, NodeId, f64)]) -> Result<Self, GraphError> {
        let mut es = Vec::with_capacity(edges.len());
        let mut ws = Vec::with_capacity(edges.len());
        for &(u, v, w) in edges {
            let (u, v) = if u < v { (u, v) } else { (v, u) };
            if !(w >= -1.0 && w <= 1.0) {
                return Err(GraphError::WeightOutOfRange { u, v, weight: w });
            }
            let sign = if w < 0.0 { -1 } else { 1 };
            es.push(Edge { u, v, sign });
            ws.push(w);
        }
        Self::build(n, es, Some(ws))
    }

    fn build(n: usize, edges: Vec<Edge>, weights: Option<Vec<f64>>) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<(NodeId, usize)>> = vec![Vec::new(); n];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for (idx, e) in edges.iter().enumerate() {
            if e.u == e.v {
                return Err(GraphError::SelfLoop { node: e.u });
            }
            if e.v >= n {
                let node = if e.u >= n { e.u } else { e.v };
                return Err(GraphError::NodeOutOfRange { node, n });
            }
            if !seen.insert((e.u, e.v)) {
                return Err(GraphError::DuplicateEdge { u: e.u, v: e.v });
            }
            adj[e.u].push((e.v, idx));
            adj[e.v].push((e.u, idx));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(SignedGraph {
            n,
            edges,
            weights,
            adj,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of positive edges (m+).
    pub fn positive_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign > 0).count()
    }

    /// Number of negative edges (m-).
    pub fn negative_count(&self) -> usize {
        self.edges.iter().filter(|e| e.sign < 0).count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    /// Per-edge weights; `None` for unweighted graphs.
    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Weight of edge `idx`: the stored weight, or the sign as ±1.0.
    pub fn edge_weight(&self, idx: usize) -> f64 {
        match &self.weights {
            Some(w) => w[idx],
            None => f64::from(self.edges[idx].sign),
        }
    }

    /// Neighbours of `i` as (neighbour, edge index), sorted by neighbour.
    pub fn neighbours(&self, i: NodeId) -> &[(NodeId, usize)] {
        &self.adj[i]
    }

    /// Number of edges incident on `i`.
    pub fn degree(&self, i: NodeId) -> usize {
        self.adj[i].len()
    }

    /// Node of maximum degree; ties broken by smallest id. `None` when n = 0.
    pub fn max_degree_node(&self) -> Option<NodeId> {
        (0..self.n).max_by_key(|&i| (self.degree(i), std::cmp::Reverse(i)))
    }

    /// Graph density 2m / (n (n-1)). Requires n >= 2.
    pub fn density(&self) -> Result<f64, GraphError> {
        if self.n < 2 {
            return Err(GraphError::TooFewNodes { n: self.n });
        }
        Ok(2.0 * self.edges.len() as f64 / (self.n as f64 * (self.n as f64 - 1.0)))
    }

    /// Sign of edge {u, v} if present.
    pub fn sign_between(&self, u: NodeId, v: NodeId) -> Option<i8> {
        self.edge_between(u, v).map(|idx| self.edges[idx].sign)
    }

    /// Edge index of {u, v} if present.
    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(nb, _)| nb)
            .ok()
            .map(|pos| list[pos].1)
    }

    /// All node triples `i < j < k` spanning a triangle with edge-sign
    /// product -1. Each triple is reported once, in lexicographic order.
    pub fn unbalanced_triangles(&self) -> Vec<(NodeId, NodeId, NodeId)> {
        let mut out = Vec::new();
        for e in &self.edges {
            let (i, j) = (e.u, e.v);
            // common neighbours k > j keep each triangle counted once
            let (a, b) = (&self.adj[i], &self.adj[j]);
            let (mut p, mut q) = (0, 0);
            while p < a.len() && q < b.len() {
                let (x, ex) = a[p];
                let (y, ey) = b[q];
                if x == y {
                    if x > j {
                        let prod =
                            e.sign as i32 * self.edges[ex].sign as i32 * self.edges[ey].sign as i32;
                        if prod == -1 {
                            out.push((i, j, x));
                        }
                    }
                    p += 1;
                    q += 1;
                } else if x < y {
                    p += 1;
                } else {
                    q += 1;
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Parity-labelled traversal balance test.
    ///
    /// Returns a zero-frustration 2-colouring when one exists, otherwise a
    /// negative cycle as certificate. Traversal is BFS from the smallest
    /// unvisited node with neighbours in sorted order, so the witness and
    /// certificate are deterministic.
    pub fn balance(&self) -> Result<Balance, GraphError> {
        if self.is_weighted() {
            return Err(GraphError::WeightedGraph);
        }
        let mut colour: Vec<Option<u8>> = vec![None; self.n];
        let mut parent: Vec<Option<(NodeId, usize)>> = vec![None; self.n];
        let mut depth = vec![0usize; self.n];
        let mut queue = std::collections::VecDeque::new();
        for root in 0..self.n {
            if colour[root].is_some() {
                continue;
            }
            colour[root] = Some(0);
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &(v, eidx) in &self.adj[u] {
                    let want = if self.edges[eidx].sign > 0 { cu } else { 1 - cu };
                    match colour[v] {
                        None => {
                            colour[v] = Some(want);
                            parent[v] = Some((u, eidx));
                            depth[v] = depth[u] + 1;
                            queue.push_back(v);
                        }
                        Some(cv) if cv != want => {
                            return Ok(Balance::Unbalanced(self.cycle_through(
                                u, v, &parent, &depth,
                            )));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        let assignment = colour.into_iter().map(|c| u32::from(c.unwrap())).collect();
        Ok(Balance::Balanced(Colouring::new(assignment)))
    }

    /// Cycle through edge {u, v} using BFS parent pointers: walk both
    /// endpoints up to their lowest common ancestor.
    fn cycle_through(
        &self,
        u: NodeId,
        v: NodeId,
        parent: &[Option<(NodeId, usize)>],
        depth: &[usize],
    ) -> Vec<NodeId> {
        let (mut a, mut b) = (u, v);
        let mut left = vec![a];
        let mut right = vec![b];
        while depth[a] > depth[b] {
            a = parent[a].unwrap().0;
            left.push(a);
        }
        while depth[b] > depth[a] {
            b = parent[b].unwrap().0;
            right.push(b);
        }
        while a != b {
            a = parent[a].unwrap().0;
            b = parent[b].unwrap().0;
            left.push(a);
            right.push(b);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    }

    /// True iff a 2-colouring with zero frustrated edges exists.
    pub fn is_balanced(&self) -> Result<bool, GraphError> {
        Ok(matches!(self.balance()?, Balance::Balanced(_)))
    }
}

/// Outcome of the balance test: a witness colouring or a negative cycle.
#[derive(Clone, Debug, PartialEq)]
pub enum Balance {
    Balanced(Colouring),
    /// Node sequence of a cycle with an odd number of negative edges
    /// (consecutive nodes adjacent, last adjacent to first).
    Unbalanced(Vec<NodeId>),
}

/// Per-node colour assignment. Colours are `0..k`; the base problem uses k=2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Colouring {
    assignment: Vec<u32>,
}

impl Colouring {
    pub fn new(assignment: Vec<u32>) -> Self {
        Colouring { assignment }
    }

    /// All-zero colouring of `n` nodes.
    pub fn uniform(n: usize) -> Self {
        Colouring {
            assignment: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn colour(&self, i: NodeId) -> u32 {
        self.assignment[i]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.assignment
    }

    pub fn set(&mut self, i: NodeId, c: u32) {
        self.assignment[i] = c;
    }

    /// Complement every colour of a 2-colouring.
    pub fn flipped(&self) -> Self {
        Colouring {
            assignment: self.assignment.iter().map(|&c| 1 - c).collect(),
        }
    }
}

/// Frustration count of a graph under a colouring, with per-edge states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrustrationSummary {
    pub count: u64,
    /// Per-edge frustration flag, parallel to `SignedGraph::edges`.
    pub frustrated: Vec<bool>,
}

/// Frustration state per edge: a positive edge is frustrated iff its
/// endpoints get different colours, a negative edge iff they get the same.
/// The rule only compares colours for equality, so it applies unchanged to
/// colourings with any number of colours.
pub fn frustration_count(g: &SignedGraph, x: &Colouring) -> Result<FrustrationSummary, GraphError> {
    if g.is_weighted() {
        return Err(GraphError::WeightedGraph);
    }
    if x.len() != g.node_count() {
        return Err(GraphError::ColouringLengthMismatch {
            expected: g.node_count(),
            got: x.len(),
        });
    }
    let mut frustrated = Vec::with_capacity(g.edge_count());
    let mut count = 0u64;
    for e in g.edges() {
        let same = x.colour(e.u) == x.colour(e.v);
        let f = if e.sign > 0 { !same } else { same };
        frustrated.push(f);
        count += u64::from(f);
    }
    Ok(FrustrationSummary { count, frustrated })
}

/// Weighted frustration of a 2-colouring: an edge of weight w contributes
/// (1-w)/2 when its endpoints share a colour and (1+w)/2 otherwise.
pub fn weighted_frustration(g: &SignedGraph, x: &Colouring) -> Result<f64, GraphError> {
    if x.len() != g.node_count() {
        return Err(GraphError::ColouringLengthMismatch {
            expected: g.node_count(),
            got: x.len(),
        });
    }
    let mut total = 0.0;
    for (idx, e) in g.edges().iter().enumerate() {
        let w = g.edge_weight(idx);
        total += if x.colour(e.u) == x.colour(e.v) {
            (1.0 - w) / 2.0
        } else {
            (1.0 + w) / 2.0
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn sample_counts() {
        let g = samples::mixed_four();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.positive_count(), 2);
        assert_eq!(g.negative_count(), 3);
    }

    #[test]
    fn frustration_of_sample_colourings() {
        let g = samples::mixed_four();
        // arbitrary colouring: two frustrated edges (0,2) and (2,3)
        let s = frustration_count(&g, &Colouring::new(vec![0, 0, 1, 1])).unwrap();
        assert_eq!(s.count, 2);
        let names: Vec<_> = g
            .edges()
            .iter()
            .zip(&s.frustrated)
            .filter(|(_, &f)| f)
            .map(|(e, _)| (e.u, e.v))
            .collect();
        assert_eq!(names, vec![(0, 2), (2, 3)]);
        // optimal colouring: one frustrated edge (1,2)
        let s = frustration_count(&g, &Colouring::new(vec![0, 0, 0, 1])).unwrap();
        assert_eq!(s.count, 1);
        let names: Vec<_> = g
            .edges()
            .iter()
            .zip(&s.frustrated)
            .filter(|(_, &f)| f)
            .map(|(e, _)| (e.u, e.v))
            .collect();
        assert_eq!(names, vec![(1, 2)]);
    }

    #[test]
    fn all_positive_triangle_same_colour() {
        let g = SignedGraph::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let s = frustration_count(&g, &Colouring::uniform(3)).unwrap();
        assert_eq!(s.count, 0);
    }

    #[test]
    fn colouring_length_mismatch() {
        let g = samples::mixed_four();
        let err = frustration_count(&g, &Colouring::uniform(3)).unwrap_err();
        assert!(matches!(err, GraphError::ColouringLengthMismatch { .. }));
    }

    #[test]
    fn density_values() {
        let g = samples::complete_negative(5);
        assert!((g.density().unwrap() - 1.0).abs() < 1e-12);
        // n=60, m=539 -> 0.3045...
        let edges: Vec<_> = (0..539)
            .map(|k| {
                // any simple graph with 539 edges on 60 nodes
                let mut c = 0;
                for u in 0..60 {
                    for v in (u + 1)..60 {
                        if c == k {
                            return (u, v, 1i8);
                        }
                        c += 1;
                    }
                }
                unreachable!()
            })
            .collect();
        let g = SignedGraph::new(60, &edges).unwrap();
        let rho = g.density().unwrap();
        assert!((rho - 539.0 * 2.0 / (60.0 * 59.0)).abs() < 1e-12);
        assert!((rho - 0.3045).abs() < 1e-3);
        let err = SignedGraph::new(1, &[]).unwrap().density().unwrap_err();
        assert!(matches!(err, GraphError::TooFewNodes { n: 1 }));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            SignedGraph::new(3, &[(1, 1, 1)]),
            Err(GraphError::SelfLoop { node: 1 })
        ));
        assert!(matches!(
            SignedGraph::new(3, &[(0, 1, 1), (1, 0, -1)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1 })
        ));
        assert!(matches!(
            SignedGraph::new(2, &[(0, 2, 1)]),
            Err(GraphError::NodeOutOfRange { node: 2, n: 2 })
        ));
        assert!(matches!(
            SignedGraph::new(3, &[(0, 1, 2)]),
            Err(GraphError::InvalidSign { .. })
        ));
        assert!(matches!(
            SignedGraph::weighted(2, &[(0, 1, 1.5)]),
            Err(GraphError::WeightOutOfRange { .. })
        ));
    }

    #[test]
    fn unbalanced_triangle_listing() {
        let g = SignedGraph::new(3, &[(0, 1, -1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert_eq!(g.unbalanced_triangles(), vec![(0, 1, 2)]);

        let k4_pos = samples::complete(4, 1);
        assert!(k4_pos.unbalanced_triangles().is_empty());

        // every triangle of an all-negative K4 has sign (-1)^3 = -1
        let k4_neg = samples::complete_negative(4);
        assert_eq!(
            k4_neg.unbalanced_triangles(),
            vec![(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
        );
    }

    #[test]
    fn balance_witness_and_certificate() {
        let g = samples::complete(4, 1);
        match g.balance().unwrap() {
            Balance::Balanced(c) => {
                assert_eq!(c.as_slice(), &[0, 0, 0, 0]);
            }
            _ => panic!("all-positive graph is balanced"),
        }

        let g = SignedGraph::new(2, &[(0, 1, -1)]).unwrap();
        match g.balance().unwrap() {
            Balance::Balanced(c) => assert_ne!(c.colour(0), c.colour(1)),
            _ => panic!("single negative edge is balanced"),
        }

        let g = SignedGraph::new(3, &[(0, 1, -1), (1, 2, 1), (0, 2, 1)]).unwrap();
        match g.balance().unwrap() {
            Balance::Unbalanced(cycle) => {
                assert_eq!(cycle.len(), 3);
                // certificate: odd number of negative edges along the cycle
                let mut neg = 0;
                for i in 0..cycle.len() {
                    let s = g
                        .sign_between(cycle[i], cycle[(i + 1) % cycle.len()])
                        .expect("cycle edges exist");
                    if s < 0 {
                        neg += 1;
                    }
                }
                assert_eq!(neg % 2, 1);
            }
            _ => panic!("triangle with one negative edge is unbalanced"),
        }
    }

    #[test]
    fn degree_queries() {
        let path = SignedGraph::new(3, &[(0, 1, 1), (1, 2, 1)]).unwrap();
        assert_eq!(path.degree(1), 2);

        let star = samples::star(5, 1);
        assert_eq!(star.max_degree_node(), Some(0));

        // both endpoints of every edge have degree 3; smallest id wins
        let g = samples::complete(4, 1);
        assert_eq!(g.max_degree_node(), Some(0));
    }

    #[test]
    fn weighted_frustration_values() {
        let g = SignedGraph::weighted(2, &[(0, 1, 0.0)]).unwrap();
        assert_eq!(weighted_frustration(&g, &Colouring::uniform(2)).unwrap(), 0.5);
        assert_eq!(
            weighted_frustration(&g, &Colouring::new(vec![0, 1])).unwrap(),
            0.5
        );
        let g = SignedGraph::weighted(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(weighted_frustration(&g, &Colouring::uniform(2)).unwrap(), 0.0);
        assert_eq!(
            weighted_frustration(&g, &Colouring::new(vec![0, 1])).unwrap(),
            1.0
        );
    }
}
