//! Seeded random signed-graph generation for the experiment harness.
//!
//! Two topology models are provided: Erdős–Rényi (by density or exact edge
//! count) and Barabási–Albert with an exact target edge count, where the
//! per-step attachment counts are derived from the target so the realised
//! m matches exactly. Signs are assigned by shuffling the canonical edge
//! list with a dedicated RNG stream and negating a prefix, so the sign
//! pattern is exact-count, uniform over edges, and independent of the
//! topology draw.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{NodeId, SignedGraph};

/// Topology model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenModel {
    ErdosRenyi,
    BarabasiAlbert,
}

/// Edge budget: Bernoulli density or an exact count.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeBudget {
    Density(f64),
    Exact(usize),
}

/// Full generator specification; the seed determines the output.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub model: GenModel,
    pub n: usize,
    pub edges: EdgeBudget,
    /// Fraction of edges made negative (rounded to the nearest count).
    pub neg_fraction: f64,
    pub seed: u64,
    /// Uniform weights in [-1, 1] instead of ±1 signs.
    pub weighted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenError {
    InvalidDensity(f64),
    InvalidNegFraction(f64),
    TooManyEdges { m: usize, max: usize },
    Infeasible { detail: String },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::InvalidDensity(d) => write!(f, "density {d} outside [0, 1]"),
            GenError::InvalidNegFraction(x) => write!(f, "negative fraction {x} outside [0, 1]"),
            GenError::TooManyEdges { m, max } => {
                write!(f, "requested {m} edges, simple graph allows at most {max}")
            }
            GenError::Infeasible { detail } => write!(f, "{detail}"),
        }
    }
}

impl std::error::Error for GenError {}

/// Generate the signed graph described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<SignedGraph, GenError> {
    if !(0.0..=1.0).contains(&spec.neg_fraction) {
        return Err(GenError::InvalidNegFraction(spec.neg_fraction));
    }
    let mut topo_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    topo_rng.set_stream(0);
    let mut sign_rng = ChaCha8Rng::seed_from_u64(spec.seed);
    sign_rng.set_stream(1);

    let mut pairs = match spec.model {
        GenModel::ErdosRenyi => erdos_renyi(spec.n, spec.edges, &mut topo_rng)?,
        GenModel::BarabasiAlbert => barabasi_albert(spec.n, spec.edges, &mut topo_rng)?,
    };
    pairs.sort_unstable();

    if spec.weighted {
        let weighted: Vec<_> = pairs
            .iter()
            .map(|&(u, v)| (u, v, sign_rng.gen_range(-1.0..=1.0)))
            .collect();
        return Ok(SignedGraph::weighted(spec.n, &weighted).expect("generator output is simple"));
    }

    let m = pairs.len();
    let neg = ((m as f64) * spec.neg_fraction).round() as usize;
    let neg = neg.min(m);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut sign_rng);
    let mut signs = vec![1i8; m];
    for &idx in order.iter().take(neg) {
        signs[idx] = -1;
    }
    let edges: Vec<_> = pairs
        .iter()
        .zip(&signs)
        .map(|(&(u, v), &s)| (u, v, s))
        .collect();
    Ok(SignedGraph::new(spec.n, &edges).expect("generator output is simple"))
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

fn erdos_renyi(
    n: usize,
    budget: EdgeBudget,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(NodeId, NodeId)>, GenError> {
    match budget {
        EdgeBudget::Density(rho) => {
            if !(0.0..=1.0).contains(&rho) {
                return Err(GenError::InvalidDensity(rho));
            }
            let mut pairs = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(rho) {
                        pairs.push((u, v));
                    }
                }
            }
            Ok(pairs)
        }
        EdgeBudget::Exact(m) => {
            let total = pair_count(n);
            if m > total {
                return Err(GenError::TooManyEdges { m, max: total });
            }
            // partial Fisher-Yates over pair indices with virtual swaps
            let mut swapped: std::collections::HashMap<usize, usize> = Default::default();
            let mut chosen = Vec::with_capacity(m);
            for i in 0..m {
                let j = rng.gen_range(i..total);
                let vj = *swapped.get(&j).unwrap_or(&j);
                let vi = *swapped.get(&i).unwrap_or(&i);
                chosen.push(vj);
                swapped.insert(j, vi);
            }
            Ok(chosen.into_iter().map(|idx| decode_pair(idx, n)).collect())
        }
    }
}

/// Map a linear index in 0..C(n,2) to the pair (u, v), u < v, in row order.
fn decode_pair(idx: usize, n: usize) -> (NodeId, NodeId) {
    let mut u = 0usize;
    let mut remaining = idx;
    loop {
        let row = n - 1 - u;
        if remaining < row {
            return (u, u + 1 + remaining);
        }
        remaining -= row;
        u += 1;
    }
}

/// Preferential attachment with an exact total edge count.
///
/// Node t (t = 1..n-1) attaches to `a_t` distinct earlier nodes, where
/// a_t = min(t, a) for the smallest `a` whose total reaches m, minus a
/// correction spread over the last nodes so that the sum is exactly m.
/// Targets are drawn with probability proportional to degree + 1.
fn barabasi_albert(
    n: usize,
    budget: EdgeBudget,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(NodeId, NodeId)>, GenError> {
    let m = match budget {
        EdgeBudget::Exact(m) => m,
        EdgeBudget::Density(_) => {
            return Err(GenError::Infeasible {
                detail: "preferential attachment takes an exact edge count, not a density"
                    .to_string(),
            })
        }
    };
    let total = pair_count(n);
    if m > total {
        return Err(GenError::TooManyEdges { m, max: total });
    }
    if n >= 2 && m < n - 1 {
        return Err(GenError::Infeasible {
            detail: format!("target m={m} below n-1={}; every new node attaches at least once", n - 1),
        });
    }
    if n < 2 {
        return Ok(Vec::new());
    }

    let sum_for = |a: usize| -> usize { (1..n).map(|t| t.min(a)).sum() };
    let mut attach_base = 1usize;
    while sum_for(attach_base) < m {
        attach_base += 1;
    }
    let mut counts: Vec<usize> = (1..n).map(|t| t.min(attach_base)).collect();
    let mut excess = sum_for(attach_base) - m;
    // trim the later (least constrained) steps first
    for c in counts.iter_mut().rev() {
        if excess == 0 {
            break;
        }
        let cut = excess.min(c.saturating_sub(1));
        *c -= cut;
        excess -= cut;
    }
    debug_assert_eq!(counts.iter().sum::<usize>(), m);

    let mut weight = vec![1u64; n]; // degree + 1
    let mut total_weight = 1u64;
    let mut pairs = Vec::with_capacity(m);
    let mut picked = vec![false; n];
    for t in 1..n {
        let want = counts[t - 1];
        let mut targets = Vec::with_capacity(want);
        while targets.len() < want {
            let mut r = rng.gen_range(0..total_weight);
            let mut v = 0usize;
            while r >= weight[v] || picked[v] {
                if !picked[v] {
                    r -= weight[v];
                }
                v += 1;
            }
            picked[v] = true;
            total_weight -= weight[v];
            targets.push(v);
        }
        for &v in &targets {
            picked[v] = false;
            total_weight += weight[v];
            pairs.push((v.min(t), v.max(t)));
            weight[v] += 1;
            total_weight += 1;
        }
        weight[t] += want as u64;
        // node t enters the urn with weight degree + 1
        total_weight += weight[t];
    }
    Ok(pairs)
}
