//! Brute-force ground truth for every optimum the solver claims.
//!
//! All three oracles enumerate colourings exhaustively and are written to be
//! independent of the model/solver path: they never touch the ILP machinery.
//! Hard caps keep accidental exponential runs from happening silently.

use std::fmt;

use crate::graph::{Colouring, SignedGraph};

/// Default cap on node count for the 2-colour oracles (2^(n-1) colourings).
pub const DEFAULT_NODE_CAP: usize = 20;
/// Default cap on the number of multi-colour assignments (3^12).
pub const DEFAULT_ASSIGNMENT_CAP: u64 = 531_441;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    /// Instance exceeds the enumeration cap; refuse instead of running for hours.
    TooLarge { detail: String },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::TooLarge { detail } => write!(f, "oracle refuses: {detail}"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Exact minimum frustration count over all 2-colourings.
///
/// Node 0's colour is fixed to 0 (complementing every colour leaves the
/// count unchanged), so 2^(n-1) colourings are enumerated in Gray-code
/// order with O(degree) incremental updates per step. Returns the minimum
/// and its lexicographically smallest optimal colouring.
pub fn brute_force_l(g: &SignedGraph) -> Result<(u64, Colouring), OracleError> {
    brute_force_l_capped(g, DEFAULT_NODE_CAP)
}

pub fn brute_force_l_capped(
    g: &SignedGraph,
    node_cap: usize,
) -> Result<(u64, Colouring), OracleError> {
    let n = g.node_count();
    if n > node_cap {
        return Err(OracleError::TooLarge {
            detail: format!("n={n} exceeds the 2-colour enumeration cap {node_cap}"),
        });
    }
    if n == 0 {
        return Ok((0, Colouring::uniform(0)));
    }

    let mut colours = vec![0u8; n];
    let mut cur: u64 = g.edges().iter().filter(|e| e.sign < 0).count() as u64;
    let mut best = cur;
    let mut best_colours = colours.clone();

    let steps: u64 = 1u64 << (n - 1);
    for s in 1..steps {
        // Gray code over nodes 1..n: step s flips node (trailing zeros + 1)
        let v = (s.trailing_zeros() as usize) + 1;
        colours[v] ^= 1;
        let mut delta: i64 = 0;
        for &(nb, eidx) in g.neighbours(v) {
            let same = colours[v] == colours[nb];
            let frustrated = if g.edges()[eidx].sign > 0 { !same } else { same };
            // the edge just toggled its state
            delta += if frustrated { 1 } else { -1 };
        }
        cur = (cur as i64 + delta) as u64;
        if cur < best || (cur == best && colours < best_colours) {
            best = cur;
            best_colours = colours.clone();
        }
    }
    let witness = Colouring::new(best_colours.into_iter().map(u32::from).collect());
    Ok((best, witness))
}

/// Exact minimum frustration count over all k^n colourings.
pub fn brute_force_multicolour(g: &SignedGraph, k: u32) -> Result<u64, OracleError> {
    brute_force_multicolour_capped(g, k, DEFAULT_ASSIGNMENT_CAP)
}

pub fn brute_force_multicolour_capped(
    g: &SignedGraph,
    k: u32,
    assignment_cap: u64,
) -> Result<u64, OracleError> {
    let n = g.node_count();
    if k == 0 {
        return Err(OracleError::TooLarge {
            detail: "k must be at least 1".to_string(),
        });
    }
    let mut total: u64 = 1;
    for _ in 0..n {
        total = match total.checked_mul(u64::from(k)) {
            Some(t) if t <= assignment_cap => t,
            _ => {
                return Err(OracleError::TooLarge {
                    detail: format!(
                        "k^n = {k}^{n} exceeds the assignment cap {assignment_cap}"
                    ),
                })
            }
        };
    }

    // depth-first assignment in node order; edge (u, v) with u < v is
    // scored once both endpoints are assigned, i.e. at depth v.
    let mut colours = vec![0u32; n];
    let mut best = u64::MAX;
    let mut partial = vec![0u64; n + 1];
    let mut depth = 0usize;
    let mut next_colour = vec![0u32; n + 1];
    loop {
        if depth == n {
            best = best.min(partial[n]);
            if depth == 0 {
                break;
            }
            depth -= 1;
            continue;
        }
        let c = next_colour[depth];
        if c >= k {
            next_colour[depth] = 0;
            if depth == 0 {
                break;
            }
            depth -= 1;
            continue;
        }
        next_colour[depth] += 1;
        colours[depth] = c;
        let mut add = 0u64;
        for &(nb, eidx) in g.neighbours(depth) {
            if nb < depth {
                let same = colours[nb] == c;
                let f = if g.edges()[eidx].sign > 0 { !same } else { same };
                add += u64::from(f);
            }
        }
        partial[depth + 1] = partial[depth] + add;
        depth += 1;
    }
    if n == 0 {
        best = 0;
    }
    Ok(best)
}

/// Exact minimum weighted frustration over all 2-colourings: an edge of
/// weight w contributes (1-w)/2 when its endpoints share a colour and
/// (1+w)/2 otherwise.
pub fn brute_force_weighted(g: &SignedGraph) -> Result<f64, OracleError> {
    brute_force_weighted_capped(g, DEFAULT_NODE_CAP)
}

pub fn brute_force_weighted_capped(
    g: &SignedGraph,
    node_cap: usize,
) -> Result<f64, OracleError> {
    let n = g.node_count();
    if n > node_cap {
        return Err(OracleError::TooLarge {
            detail: format!("n={n} exceeds the 2-colour enumeration cap {node_cap}"),
        });
    }
    if n == 0 {
        return Ok(0.0);
    }
    let mut colours = vec![0u8; n];
    // all nodes share a colour: every edge contributes (1-w)/2
    let mut cur: f64 = (0..g.edge_count())
        .map(|i| (1.0 - g.edge_weight(i)) / 2.0)
        .sum();
    let mut best = cur;
    let steps: u64 = 1u64 << (n - 1);
    for s in 1..steps {
        let v = (s.trailing_zeros() as usize) + 1;
        colours[v] ^= 1;
        for &(nb, eidx) in g.neighbours(v) {
            let w = g.edge_weight(eidx);
            // toggling v moves the edge between (1-w)/2 and (1+w)/2
            cur += if colours[v] == colours[nb] { -w } else { w };
        }
        if cur < best {
            best = cur;
        }
    }
    Ok(best)
}
