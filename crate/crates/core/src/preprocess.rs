//! Frustration-preserving size reduction.
//!
//! Two reductions are implemented: iterative removal of degree-0 and
//! degree-1 nodes (a pendant edge is always satisfiable, so removal keeps
//! the optimum), and decomposition into biconnected components, which share
//! only articulation points, so the optimum is the sum of the block optima
//! and block colourings can be reconciled by whole-block flips.
//!
//! Larger separator-based reductions are not implemented; `decompose` is
//! the hook where they would slot in.

use crate::graph::{Colouring, NodeId, SignedGraph};

/// One removal performed by [`strip_degree_le_one`], in original node ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StripStep {
    Isolated { node: NodeId },
    Pendant { node: NodeId, neighbour: NodeId, sign: i8 },
}

/// Removal log; enough to extend any colouring of the reduced graph back
/// to the original with equal frustration count.
#[derive(Clone, Debug, Default)]
pub struct StripLog {
    pub steps: Vec<StripStep>,
}

/// A graph over compact ids plus the map back to the ids it came from.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: SignedGraph,
    /// compact id -> original id, ascending.
    pub orig_ids: Vec<NodeId>,
}

/// Result of pendant/isolated stripping.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub sub: Subgraph,
    pub log: StripLog,
}

/// Iteratively remove isolated and pendant vertices until none remain.
pub fn strip_degree_le_one(g: &SignedGraph) -> Reduced {
    let n = g.node_count();
    let mut degree: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    let mut alive = vec![true; n];
    let mut log = StripLog::default();
    let mut queue: std::collections::VecDeque<NodeId> =
        (0..n).filter(|&i| degree[i] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] || degree[v] > 1 {
            continue;
        }
        alive[v] = false;
        if degree[v] == 0 {
            log.steps.push(StripStep::Isolated { node: v });
            continue;
        }
        // the unique remaining live neighbour
        let (nb, eidx) = g
            .neighbours(v)
            .iter()
            .copied()
            .find(|&(nb, _)| alive[nb])
            .expect("pendant node has a live neighbour");
        log.steps.push(StripStep::Pendant {
            node: v,
            neighbour: nb,
            sign: g.edges()[eidx].sign,
        });
        degree[v] = 0;
        degree[nb] -= 1;
        if degree[nb] <= 1 {
            queue.push_back(nb);
        }
    }
    Reduced {
        sub: induced(g, &alive),
        log,
    }
}

fn induced(g: &SignedGraph, alive: &[bool]) -> Subgraph {
    let orig_ids: Vec<NodeId> = (0..g.node_count()).filter(|&i| alive[i]).collect();
    let mut compact = vec![usize::MAX; g.node_count()];
    for (new, &old) in orig_ids.iter().enumerate() {
        compact[old] = new;
    }
    let edges: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| alive[e.u] && alive[e.v])
        .map(|e| (compact[e.u], compact[e.v], e.sign))
        .collect();
    Subgraph {
        graph: SignedGraph::new(orig_ids.len(), &edges).expect("induced subgraph is simple"),
        orig_ids,
    }
}

/// Biconnected components (blocks) of the graph; every edge lands in
/// exactly one block and blocks intersect only at articulation points.
/// Degree-0 nodes belong to no block.
pub fn split_blocks(g: &SignedGraph) -> Vec<Subgraph> {
    let n = g.node_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();

    // iterative DFS: (node, parent edge index, next adjacency position)
    let mut stack: Vec<(NodeId, usize, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));
        loop {
            let Some(frame) = stack.last_mut() else { break };
            let (u, pedge) = (frame.0, frame.1);
            if frame.2 < g.neighbours(u).len() {
                let (v, eidx) = g.neighbours(u)[frame.2];
                frame.2 += 1;
                if eidx == pedge {
                    continue;
                }
                if disc[v] == usize::MAX {
                    edge_stack.push(eidx);
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    stack.push((v, eidx, 0));
                } else if disc[v] < disc[u] {
                    // upward back edge
                    edge_stack.push(eidx);
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                stack.pop();
                if let Some(pframe) = stack.last_mut() {
                    let p = pframe.0;
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        // everything pushed since (and including) the tree
                        // edge p-u forms one block
                        let mut block = Vec::new();
                        while let Some(top) = edge_stack.pop() {
                            block.push(top);
                            if top == pedge {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }

    blocks
        .into_iter()
        .map(|mut edge_idxs| {
            edge_idxs.sort_unstable();
            let mut alive = vec![false; n];
            for &ei in &edge_idxs {
                alive[g.edges()[ei].u] = true;
                alive[g.edges()[ei].v] = true;
            }
            let orig_ids: Vec<NodeId> = (0..n).filter(|&i| alive[i]).collect();
            let mut compact = vec![usize::MAX; n];
            for (new, &old) in orig_ids.iter().enumerate() {
                compact[old] = new;
            }
            let edges: Vec<_> = edge_idxs
                .iter()
                .map(|&ei| {
                    let e = &g.edges()[ei];
                    (compact[e.u], compact[e.v], e.sign)
                })
                .collect();
            Subgraph {
                graph: SignedGraph::new(orig_ids.len(), &edges).expect("block is simple"),
                orig_ids,
            }
        })
        .collect()
}

/// Full reduction pipeline: strip, then split the remainder into blocks.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n_original: usize,
    pub log: StripLog,
    /// Blocks with `orig_ids` in *original* graph ids.
    pub blocks: Vec<Subgraph>,
}

pub fn decompose(g: &SignedGraph) -> Decomposition {
    let reduced = strip_degree_le_one(g);
    let blocks = split_blocks(&reduced.sub.graph)
        .into_iter()
        .map(|b| Subgraph {
            orig_ids: b.orig_ids.iter().map(|&i| reduced.sub.orig_ids[i]).collect(),
            graph: b.graph,
        })
        .collect();
    Decomposition {
        n_original: g.node_count(),
        log: reduced.log,
        blocks,
    }
}

/// Merge per-block 2-colourings into a colouring of the original graph
/// achieving the sum of the block frustration counts.
///
/// Blocks are placed in block-cut-tree order; when a block meets an already
/// coloured articulation vertex the whole block is flipped to agree (valid
/// by global flip invariance). Stripped nodes are re-added in reverse
/// removal order with the colour that satisfies their pendant edge.
pub fn recombine(dec: &Decomposition, block_colourings: &[Colouring]) -> Colouring {
    assert_eq!(dec.blocks.len(), block_colourings.len());
    let mut global: Vec<Option<u32>> = vec![None; dec.n_original];

    // vertex -> blocks containing it
    let mut at: std::collections::HashMap<NodeId, Vec<usize>> = Default::default();
    for (bi, b) in dec.blocks.iter().enumerate() {
        for &v in &b.orig_ids {
            at.entry(v).or_default().push(bi);
        }
    }
    let mut placed = vec![false; dec.blocks.len()];
    for start in 0..dec.blocks.len() {
        if placed[start] {
            continue;
        }
        let mut queue = std::collections::VecDeque::from([(start, 0u32)]);
        placed[start] = true;
        while let Some((bi, flip)) = queue.pop_front() {
            let block = &dec.blocks[bi];
            let colours = &block_colourings[bi];
            for (local, &orig) in block.orig_ids.iter().enumerate() {
                let c = colours.colour(local) ^ flip;
                match global[orig] {
                    None => global[orig] = Some(c),
                    Some(existing) => debug_assert_eq!(existing, c),
                }
            }
            for (local, &orig) in block.orig_ids.iter().enumerate() {
                for &nb in at.get(&orig).into_iter().flatten() {
                    if placed[nb] {
                        continue;
                    }
                    placed[nb] = true;
                    let here = colours.colour(local) ^ flip;
                    let there = block_colourings[nb].colour(
                        dec.blocks[nb]
                            .orig_ids
                            .iter()
                            .position(|&x| x == orig)
                            .unwrap(),
                    );
                    queue.push_back((nb, here ^ there));
                }
            }
        }
    }

    for step in dec.log.steps.iter().rev() {
        match *step {
            StripStep::Isolated { node } => global[node] = Some(0),
            StripStep::Pendant {
                node,
                neighbour,
                sign,
            } => {
                let nc = global[neighbour].expect("neighbour outlives the pendant");
                global[node] = Some(if sign > 0 { nc } else { 1 - nc });
            }
        }
    }

    Colouring::new(global.into_iter().map(|c| c.unwrap_or(0)).collect())
}
