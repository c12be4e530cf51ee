//! Exact branch and bound over the binary linear models.
//!
//! Search is best-bound with depth-first plunging: after branching, the
//! `x = 1` child is evaluated immediately and the sibling is parked in a
//! priority queue keyed by its parent bound. Node relaxations are warm
//! dual-simplex re-solves; lazy cuts from the pool are separated at every
//! node until no violation remains, and cuts, once active, stay in the LP
//! for the rest of the search. Incumbents come from integral node
//! relaxations and from rounding the node point followed by single-move
//! descent. With an integral objective the node bound is rounded up, and
//! nonbasic integer variables whose reduced cost already pushes past the
//! incumbent are fixed for the subtree.

use std::collections::BinaryHeap;
use std::fmt;
use std::time::{Duration, Instant};

use crate::graph::{frustration_count, Balance, Colouring, SignedGraph};
use crate::lp::{BasisHandle, LpConfig, LpError, LpStatus, Simplex};
use crate::model::{
    add_fix_colour, add_triangle_cuts, build_abs, build_and, build_multicolour, build_weighted,
    build_xor, model_value, set_branch_priorities, CmpSense, Constraint, CutMode, IlpModel,
    ModelError, ModelKind, Variable,
};
use crate::preprocess::{decompose, recombine};

/// Which model to build for a graph solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelChoice {
    And,
    Xor,
    Abs,
    Weighted,
    MultiColour(u32),
}

impl ModelChoice {
    pub fn build(&self, g: &SignedGraph) -> Result<IlpModel, ModelError> {
        match *self {
            ModelChoice::And => build_and(g),
            ModelChoice::Xor => build_xor(g),
            ModelChoice::Abs => build_abs(g),
            ModelChoice::Weighted => build_weighted(g),
            ModelChoice::MultiColour(k) => build_multicolour(g, k),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            ModelChoice::And => "and".into(),
            ModelChoice::Xor => "xor".into(),
            ModelChoice::Abs => "abs".into(),
            ModelChoice::Weighted => "weighted".into(),
            ModelChoice::MultiColour(k) => format!("multi{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutsOption {
    Off,
    Lazy,
    Upfront,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Fix the colour of the maximum-degree node.
    pub fix_colour: bool,
    pub cuts: CutsOption,
    /// Degree-priority branching.
    pub priorities: bool,
    /// Relative optimality gap (UB - LB) / max(1, UB) at which to stop.
    pub gap: f64,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Strip pendants and split into biconnected blocks first
    /// (2-colour unweighted solves only).
    pub preprocess: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            fix_colour: true,
            cuts: CutsOption::Lazy,
            priorities: true,
            gap: 0.0,
            time_limit: None,
            node_limit: None,
            preprocess: true,
        }
    }
}

impl SolveOptions {
    /// All speed-ups off.
    pub fn plain() -> Self {
        SolveOptions {
            fix_colour: false,
            cuts: CutsOption::Off,
            priorities: false,
            preprocess: false,
            ..SolveOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    /// Proven optimal (or within the requested gap).
    Optimal,
    /// Stopped at a limit; `lower_bound` is proven, `optimum` is the
    /// incumbent.
    Bounded,
}

#[derive(Clone, Copy, Debug)]
pub struct TracePoint {
    pub t: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Outcome of one exact solve.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// Incumbent objective; under `Optimal` this is the global optimum.
    pub optimum: f64,
    /// Proven lower bound (equals `optimum` when optimal).
    pub lower_bound: f64,
    pub incumbent: Option<Colouring>,
    /// Relaxation value at the root, after any root cut rounds.
    pub root_objective: f64,
    /// Branch-and-bound nodes evaluated.
    pub nodes: u64,
    /// Variable count of the model(s) solved.
    pub var_count: usize,
    pub branching_factor: f64,
    pub wall_time: Duration,
    pub cut_rounds: u64,
    pub cuts_added: u64,
    pub trace: Vec<TracePoint>,
    pub model: String,
}

#[derive(Debug)]
pub enum SolveError {
    Lp(LpError),
    Model(ModelError),
    /// Every branch was infeasible and no incumbent exists; cannot happen
    /// for models built from graphs.
    Infeasible,
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Lp(e) => write!(f, "relaxation failure: {e}"),
            SolveError::Model(e) => write!(f, "model failure: {e}"),
            SolveError::Infeasible => write!(f, "model infeasible"),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<LpError> for SolveError {
    fn from(e: LpError) -> Self {
        SolveError::Lp(e)
    }
}

impl From<ModelError> for SolveError {
    fn from(e: ModelError) -> Self {
        SolveError::Model(e)
    }
}

/// `nodes` explored with `vars` variables give a factor of nodes^(1/vars);
/// 1 is ideal (optimality proven at the root).
pub fn effective_branching_factor(nodes: u64, vars: usize) -> f64 {
    if vars == 0 || nodes <= 1 {
        return 1.0;
    }
    (nodes as f64).powf(1.0 / vars as f64)
}

/// Among fractional integer variables pick the branching variable:
/// highest priority, then closest to one half, then smallest index.
pub fn branch_select(values: &[f64], vars: &[Variable], int_tol: f64) -> Option<usize> {
    let mut best: Option<(u64, f64, usize)> = None;
    for (j, var) in vars.iter().enumerate() {
        if !var.integral {
            continue;
        }
        let frac = (values[j] - values[j].round()).abs();
        if frac <= int_tol {
            continue;
        }
        let dist = (values[j] - 0.5).abs();
        let better = match best {
            None => true,
            Some((bp, bd, _)) => var.priority > bp || (var.priority == bp && dist < bd - 1e-12),
        };
        if better {
            best = Some((var.priority, dist, j));
        }
    }
    best.map(|(_, _, j)| j)
}

/// Round a relaxation point to colours and descend: repeatedly flip any
/// node whose flip strictly decreases the frustration count until none
/// exists. The result is a feasible upper bound from any start.
pub fn incumbent_heuristic(g: &SignedGraph, node_values: &[f64]) -> Colouring {
    let colours: Vec<u32> = (0..g.node_count())
        .map(|i| u32::from(node_values[i] >= 0.5))
        .collect();
    let mut c = Colouring::new(colours);
    descend_two_colour(g, &mut c);
    c
}

/// Greedy single-flip descent on the (unweighted) frustration count.
pub fn descend_two_colour(g: &SignedGraph, c: &mut Colouring) {
    loop {
        let mut improved = false;
        for v in 0..g.node_count() {
            let mut gain = 0i64;
            for &(nb, eidx) in g.neighbours(v) {
                let same = c.colour(v) == c.colour(nb);
                let frustrated = if g.edges()[eidx].sign > 0 { !same } else { same };
                // flipping v toggles every incident edge
                gain += if frustrated { 1 } else { -1 };
            }
            if gain > 0 {
                c.set(v, 1 - c.colour(v));
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

/// Single-node colour moves over k colours, scored by the model value.
fn descend_model(model: &IlpModel, g: &SignedGraph, c: &mut Colouring, k: u32) {
    let mut cur = model_value(model, g, c);
    loop {
        let mut improved = false;
        for v in 0..g.node_count() {
            let orig = c.colour(v);
            let mut best = orig;
            let mut best_val = cur;
            for colour in 0..k {
                if colour == orig {
                    continue;
                }
                c.set(v, colour);
                let val = model_value(model, g, c);
                if val < best_val - 1e-12 {
                    best_val = val;
                    best = colour;
                }
            }
            c.set(v, best);
            if best != orig {
                cur = best_val;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
}

/// Pull out of `pool` every cut violated by `x` beyond `tol`; the caller
/// installs the returned cuts and re-solves.
pub fn take_violated(pool: &mut Vec<Constraint>, x: &[f64], tol: f64) -> Vec<Constraint> {
    let mut violated = Vec::new();
    pool.retain(|c| {
        let lhs: f64 = c.terms.iter().map(|&(v, co)| co * x[v]).sum();
        let bad = match c.sense {
            CmpSense::Ge => lhs < c.rhs - tol,
            CmpSense::Le => lhs > c.rhs + tol,
            CmpSense::Eq => (lhs - c.rhs).abs() > tol,
        };
        if bad {
            violated.push(c.clone());
        }
        !bad
    });
    violated
}

const INT_TOL: f64 = 1e-6;
const CUT_VIOLATION_TOL: f64 = 1e-6;

struct OpenNode {
    bound: f64,
    seq: u64,
    fixes: Vec<(usize, f64)>,
    basis: BasisHandle,
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for OpenNode {}
impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OpenNode {
    // BinaryHeap is a max-heap; reverse for best-bound-first, oldest-first
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .bound
            .partial_cmp(&self.bound)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(other.seq.cmp(&self.seq))
    }
}

/// Solve one model to proven optimality (or to the gap/limits).
///
/// `g` supplies the speed-ups, the incumbent heuristic and the colour
/// extraction; models read from LP files pass `None` and rely on integral
/// relaxations alone.
pub fn solve(
    mut model: IlpModel,
    g: Option<&SignedGraph>,
    options: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    if let Some(g) = g {
        if options.fix_colour && g.node_count() > 0 {
            add_fix_colour(&mut model, g)?;
        }
        let cuttable = matches!(
            model.kind,
            ModelKind::And | ModelKind::Xor | ModelKind::Abs
        );
        match options.cuts {
            CutsOption::Off => {}
            CutsOption::Lazy if cuttable => {
                add_triangle_cuts(&mut model, g, CutMode::Lazy)?;
            }
            CutsOption::Upfront if cuttable => {
                add_triangle_cuts(&mut model, g, CutMode::Upfront)?;
            }
            // cut validity is proven for ±1 signs only
            _ => {}
        }
        if options.priorities {
            set_branch_priorities(&mut model, g);
        }
    }
    search(model, g, options, start)
}

/// The branch-and-bound loop; `model` already carries its speed-ups.
fn search(
    model: IlpModel,
    g: Option<&SignedGraph>,
    options: &SolveOptions,
    start: Instant,
) -> Result<SolveReport, SolveError> {
    let integral_obj = objective_is_integral(&model);
    let k_colours = match model.kind {
        ModelKind::MultiColour { k } => k,
        _ => 2,
    };

    let mut simplex = Simplex::new(&model, LpConfig::default());
    let mut pool = model.cut_pool.clone();

    let mut ub = f64::INFINITY;
    let mut incumbent: Option<Colouring> = None;
    let mut published_lb = f64::NEG_INFINITY;
    let mut trace: Vec<TracePoint> = Vec::new();
    let mut nodes: u64 = 0;
    let mut cut_rounds: u64 = 0;
    let mut cuts_added: u64 = 0;
    let mut root_objective = 0.0;
    let mut heap: BinaryHeap<OpenNode> = BinaryHeap::new();
    let mut seq: u64 = 0;
    let mut status = SolveStatus::Optimal;

    // bound overrides currently applied to the simplex
    let mut applied: Vec<usize> = Vec::new();
    // the node about to be evaluated; starts at the root
    let mut current: Option<(f64, Vec<(usize, f64)>)> = Some((f64::NEG_INFINITY, Vec::new()));

    let prune_level = |ub: f64| -> f64 {
        if integral_obj {
            ub - 1.0 + INT_TOL
        } else {
            ub - 1e-9
        }
    };

    'search: loop {
        let (node_bound, fixes) = match current.take() {
            Some(n) => n,
            None => loop {
                match heap.pop() {
                    Some(n) => {
                        // parked nodes may be dominated by newer incumbents
                        if n.bound >= prune_level(ub) {
                            continue;
                        }
                        for &v in &applied {
                            let (lo, up) = simplex.base_bounds(v);
                            simplex.set_bounds(v, lo, up);
                        }
                        applied.clear();
                        for &(v, val) in &n.fixes {
                            simplex.set_bounds(v, val, val);
                            applied.push(v);
                        }
                        simplex.load_basis(&n.basis);
                        break (n.bound, n.fixes);
                    }
                    None => break 'search,
                }
            },
        };

        let hit_limit = options
            .time_limit
            .map(|l| start.elapsed() >= l)
            .unwrap_or(false)
            || options.node_limit.map(|l| nodes >= l).unwrap_or(false);
        if hit_limit {
            status = SolveStatus::Bounded;
            seq += 1;
            heap.push(OpenNode {
                bound: node_bound,
                seq,
                fixes,
                basis: simplex.basis(),
            });
            break 'search;
        }

        nodes += 1;
        if simplex.solve()? == LpStatus::Infeasible {
            publish(&mut trace, &mut published_lb, &heap, None, ub, start);
            continue;
        }

        // lazy separation: pull in every violated pool cut and re-solve
        while !pool.is_empty() {
            let violated = take_violated(&mut pool, simplex.structural_values(), CUT_VIOLATION_TOL);
            if violated.is_empty() {
                break;
            }
            cut_rounds += 1;
            cuts_added += violated.len() as u64;
            simplex.add_rows(&violated);
            if simplex.solve()? == LpStatus::Infeasible {
                publish(&mut trace, &mut published_lb, &heap, None, ub, start);
                continue 'search;
            }
        }

        let obj = simplex.objective_value();
        let node_lb = if integral_obj {
            (obj - INT_TOL).ceil()
        } else {
            obj
        };
        if nodes == 1 {
            root_objective = obj;
        }

        if node_lb >= prune_level(ub) {
            publish(&mut trace, &mut published_lb, &heap, None, ub, start);
            continue;
        }

        let values: Vec<f64> = simplex.structural_values().to_vec();
        let fractional = branch_select(&values, &model.vars, INT_TOL);

        if fractional.is_none() {
            // integer feasible: a candidate incumbent
            let (val, colouring) = match (g, model.colouring_of(&values)) {
                (Some(g), Some(c)) => (model_value(&model, g, &c), Some(c)),
                _ => (obj, None),
            };
            if val < ub {
                ub = val;
                incumbent = colouring;
            }
            publish(&mut trace, &mut published_lb, &heap, None, ub, start);
            continue;
        }

        // heuristic incumbent from the relaxation point
        if let Some(g) = g {
            if let Some(mut cand) = model.colouring_of(&values) {
                if matches!(model.kind, ModelKind::And | ModelKind::Xor | ModelKind::Abs) {
                    descend_two_colour(g, &mut cand);
                } else {
                    descend_model(&model, g, &mut cand, k_colours);
                }
                let val = model_value(&model, g, &cand);
                if val < ub {
                    ub = val;
                    incumbent = Some(cand);
                    if node_lb >= prune_level(ub) {
                        publish(&mut trace, &mut published_lb, &heap, None, ub, start);
                        continue;
                    }
                }
            }
        }

        // reduced-cost fixing for the subtree below this node
        let mut fixes = fixes;
        if ub.is_finite() {
            for (j, var) in model.vars.iter().enumerate() {
                if !var.integral || simplex.is_basic(j) {
                    continue;
                }
                let (lo, up) = simplex.bounds(j);
                if lo >= up {
                    continue;
                }
                if obj + simplex.reduced_cost(j).abs() >= prune_level(ub) {
                    let val = simplex.value(j);
                    simplex.set_bounds(j, val, val);
                    applied.push(j);
                    fixes.push((j, val));
                }
            }
        }

        let branch = fractional.expect("fractional variable exists");
        // park the x = 0 child, plunge into x = 1 first
        let mut park_fixes = fixes.clone();
        park_fixes.push((branch, 0.0));
        seq += 1;
        heap.push(OpenNode {
            bound: node_lb,
            seq,
            fixes: park_fixes,
            basis: simplex.basis(),
        });

        simplex.set_bounds(branch, 1.0, 1.0);
        applied.push(branch);
        let mut plunge_fixes = fixes;
        plunge_fixes.push((branch, 1.0));
        current = Some((node_lb, plunge_fixes));

        publish(&mut trace, &mut published_lb, &heap, Some(node_lb), ub, start);

        if ub.is_finite() {
            let lb_now = global_lower(&heap, Some(node_lb), ub);
            if (ub - lb_now) / ub.abs().max(1.0) <= options.gap {
                status = SolveStatus::Optimal;
                break 'search;
            }
        }
    }

    let lower_bound = match status {
        SolveStatus::Optimal if options.gap == 0.0 => ub,
        _ => global_lower(&heap, None, ub).min(ub),
    };
    if incumbent.is_none() && ub.is_infinite() && status == SolveStatus::Optimal {
        return Err(SolveError::Infeasible);
    }
    published_lb = published_lb.max(lower_bound.min(ub));
    trace.push(TracePoint {
        t: start.elapsed().as_secs_f64(),
        lower: published_lb,
        upper: ub,
    });

    Ok(SolveReport {
        status,
        optimum: ub,
        lower_bound,
        incumbent,
        root_objective,
        nodes,
        var_count: model.vars.len(),
        branching_factor: effective_branching_factor(nodes, model.vars.len()),
        wall_time: start.elapsed(),
        cut_rounds,
        cuts_added,
        trace,
        model: model.kind.name(),
    })
}

fn objective_is_integral(model: &IlpModel) -> bool {
    let near_int = |v: f64| (v - v.round()).abs() < 1e-9;
    near_int(model.objective.constant) && model.objective.terms.iter().all(|&(_, c)| near_int(c))
}

/// Proven global lower bound: the worst bound over open nodes, or the
/// incumbent when the tree is exhausted.
fn global_lower(heap: &BinaryHeap<OpenNode>, current: Option<f64>, ub: f64) -> f64 {
    let mut lb = f64::INFINITY;
    if let Some(top) = heap.peek() {
        lb = lb.min(top.bound);
    }
    if let Some(c) = current {
        lb = lb.min(c);
    }
    if lb == f64::INFINITY {
        if ub.is_finite() {
            ub
        } else {
            f64::NEG_INFINITY
        }
    } else {
        lb
    }
}

fn publish(
    trace: &mut Vec<TracePoint>,
    published_lb: &mut f64,
    heap: &BinaryHeap<OpenNode>,
    current: Option<f64>,
    ub: f64,
    start: Instant,
) {
    let lb = global_lower(heap, current, ub).min(ub);
    let improved_lb = lb > *published_lb + 1e-12;
    let last_ub = trace.last().map(|t| t.upper).unwrap_or(f64::INFINITY);
    let improved_ub = ub < last_ub - 1e-12;
    if improved_lb {
        *published_lb = lb;
    }
    if improved_lb || improved_ub {
        trace.push(TracePoint {
            t: start.elapsed().as_secs_f64(),
            lower: *published_lb,
            upper: ub,
        });
    }
}

/// Solve a graph end to end: optional reduction into blocks, model build
/// with the requested speed-ups per block, search, and recombination of
/// the block colourings into one colouring of the input graph.
pub fn solve_graph(
    g: &SignedGraph,
    choice: ModelChoice,
    options: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let two_colour_signed = matches!(
        choice,
        ModelChoice::And | ModelChoice::Xor | ModelChoice::Abs
    ) && !g.is_weighted();

    if !(options.preprocess && two_colour_signed) {
        let model = choice.build(g)?;
        // solve time excludes model building, as in the reports
        return solve(model, Some(g), options);
    }

    let dec = decompose(g);
    let mut total_optimum = 0.0;
    let mut total_lower = 0.0;
    let mut nodes = 0u64;
    let mut var_count = 0usize;
    let mut root_objective = 0.0;
    let mut cut_rounds = 0u64;
    let mut cuts_added = 0u64;
    let mut status = SolveStatus::Optimal;
    let mut trace: Vec<TracePoint> = Vec::new();
    let mut solve_time = Duration::ZERO;
    // unsolved blocks bound their contribution from above by their size
    let mut pending_ub: f64 = dec.blocks.iter().map(|b| b.graph.edge_count() as f64).sum();
    let mut block_colourings: Vec<Colouring> = Vec::new();

    for block in &dec.blocks {
        pending_ub -= block.graph.edge_count() as f64;
        // balanced blocks are decided by the traversal witness alone
        match block.graph.balance().map_err(ModelError::from_graph)? {
            Balance::Balanced(witness) => {
                block_colourings.push(witness);
                continue;
            }
            Balance::Unbalanced(_) => {}
        }
        let model = choice.build(&block.graph)?;
        let remaining = options
            .time_limit
            .map(|l| l.saturating_sub(start.elapsed()));
        let block_options = SolveOptions {
            time_limit: remaining,
            preprocess: false,
            ..options.clone()
        };
        let report = solve(model, Some(&block.graph), &block_options)?;
        let t0 = (start.elapsed().as_secs_f64() - report.wall_time.as_secs_f64()).max(0.0);
        for p in &report.trace {
            trace.push(TracePoint {
                t: t0 + p.t,
                lower: total_lower + p.lower.max(0.0),
                upper: total_optimum + p.upper + pending_ub,
            });
        }
        total_optimum += report.optimum;
        total_lower += report.lower_bound.max(0.0);
        nodes += report.nodes;
        var_count += report.var_count;
        root_objective += report.root_objective;
        cut_rounds += report.cut_rounds;
        cuts_added += report.cuts_added;
        solve_time += report.wall_time;
        if report.status == SolveStatus::Bounded {
            status = SolveStatus::Bounded;
        }
        block_colourings.push(
            report
                .incumbent
                .expect("graph-built models always find an incumbent"),
        );
    }

    let colouring = recombine(&dec, &block_colourings);
    if status == SolveStatus::Optimal {
        debug_assert_eq!(
            frustration_count(g, &colouring).unwrap().count as f64,
            total_optimum
        );
    }

    Ok(SolveReport {
        status,
        optimum: total_optimum,
        lower_bound: total_lower,
        incumbent: Some(colouring),
        root_objective,
        nodes: nodes.max(1),
        var_count,
        branching_factor: effective_branching_factor(nodes.max(1), var_count),
        wall_time: solve_time,
        cut_rounds,
        cuts_added,
        trace,
        model: choice.name(),
    })
}

impl ModelError {
    fn from_graph(e: crate::graph::GraphError) -> ModelError {
        match e {
            crate::graph::GraphError::WeightedGraph => ModelError::WeightedGraph,
            _ => ModelError::EmptyGraph,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{brute_force_l, brute_force_multicolour, brute_force_weighted};
    use crate::samples;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, neg: f64) -> SignedGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v, if rng.gen_bool(neg) { -1 } else { 1 }));
                }
            }
        }
        SignedGraph::new(n, &edges).unwrap()
    }

    fn connected(g: &SignedGraph) -> bool {
        let n = g.node_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in g.neighbours(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    fn configs() -> Vec<SolveOptions> {
        let plain = SolveOptions::plain();
        vec![
            plain.clone(),
            SolveOptions {
                fix_colour: true,
                priorities: true,
                ..plain.clone()
            },
            SolveOptions {
                cuts: CutsOption::Lazy,
                ..plain.clone()
            },
            SolveOptions {
                fix_colour: true,
                priorities: true,
                cuts: CutsOption::Lazy,
                ..plain
            },
        ]
    }

    #[test]
    fn factor_arithmetic() {
        assert!((effective_branching_factor(3, 1108) - 1.0010).abs() < 5e-5);
        assert_eq!(effective_branching_factor(1, 77), 1.0);
        assert_eq!(effective_branching_factor(1, 0), 1.0);
    }

    #[test]
    fn sample_graph_all_models_all_configs() {
        let g = samples::mixed_four();
        for choice in [ModelChoice::And, ModelChoice::Xor, ModelChoice::Abs] {
            for opts in configs() {
                let r = solve_graph(&g, choice, &opts).unwrap();
                assert_eq!(r.status, SolveStatus::Optimal);
                assert_eq!(r.optimum, 1.0);
                let c = r.incumbent.unwrap();
                assert_eq!(frustration_count(&g, &c).unwrap().count, 1);
            }
        }
    }

    #[test]
    fn empty_graph_conventions() {
        let g = SignedGraph::new(0, &[]).unwrap();
        let r = solve_graph(&g, ModelChoice::Xor, &SolveOptions::default()).unwrap();
        assert_eq!(r.optimum, 0.0);
        assert_eq!(r.nodes, 1);
        assert_eq!(r.branching_factor, 1.0);
    }

    #[test]
    fn all_negative_k9_is_sixteen() {
        let g = samples::complete_negative(9);
        for choice in [ModelChoice::And, ModelChoice::Xor, ModelChoice::Abs] {
            let r = solve_graph(&g, choice, &SolveOptions::default()).unwrap();
            assert_eq!(r.optimum, 16.0);
        }
    }

    #[test]
    fn matches_oracle_across_models_and_configs() {
        let mut rng = ChaCha8Rng::seed_from_u64(1001);
        for round in 0..25 {
            let n = rng.gen_range(4..=12);
            let p = rng.gen_range(0.15..0.95);
            let neg = rng.gen_range(0.0..=1.0);
            let g = random_graph(&mut rng, n, p, neg);
            let (want, _) = brute_force_l(&g).unwrap();
            for choice in [ModelChoice::And, ModelChoice::Xor, ModelChoice::Abs] {
                for opts in configs() {
                    let r = solve_graph(&g, choice, &opts).unwrap();
                    assert_eq!(
                        r.optimum, want as f64,
                        "round {round} model {:?} fix={} cuts={:?}",
                        choice, opts.fix_colour, opts.cuts
                    );
                    let c = r.incumbent.unwrap();
                    assert_eq!(frustration_count(&g, &c).unwrap().count, want);
                }
            }
        }
    }

    #[test]
    fn preprocessing_agrees_with_whole_graph_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(1002);
        for _ in 0..15 {
            let n = rng.gen_range(6..=14);
            let g = random_graph(&mut rng, n, 0.25, 0.5);
            let with = solve_graph(
                &g,
                ModelChoice::Xor,
                &SolveOptions {
                    preprocess: true,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
            let without = solve_graph(
                &g,
                ModelChoice::Xor,
                &SolveOptions {
                    preprocess: false,
                    ..SolveOptions::default()
                },
            )
            .unwrap();
            assert_eq!(with.optimum, without.optimum);
            let c = with.incumbent.unwrap();
            assert_eq!(frustration_count(&g, &c).unwrap().count as f64, with.optimum);
        }
    }

    #[test]
    fn weighted_solves_match_oracle_at_unit_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(1003);
        for _ in 0..10 {
            let n = rng.gen_range(4..=10);
            let mut signed = Vec::new();
            let mut weighted = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        let s: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
                        signed.push((u, v, s));
                        weighted.push((u, v, f64::from(s)));
                    }
                }
            }
            let gs = SignedGraph::new(n, &signed).unwrap();
            let gw = SignedGraph::weighted(n, &weighted).unwrap();
            let (want, _) = brute_force_l(&gs).unwrap();
            let opts = SolveOptions {
                cuts: CutsOption::Off,
                ..SolveOptions::default()
            };
            let r = solve_graph(&gw, ModelChoice::Weighted, &opts).unwrap();
            assert!((r.optimum - want as f64).abs() < 1e-6);
        }
    }

    #[test]
    fn weighted_single_zero_edge_is_half() {
        let g = SignedGraph::weighted(2, &[(0, 1, 0.0)]).unwrap();
        let opts = SolveOptions {
            cuts: CutsOption::Off,
            ..SolveOptions::default()
        };
        let r = solve_graph(&g, ModelChoice::Weighted, &opts).unwrap();
        assert!((r.optimum - 0.5).abs() < 1e-9);
    }

    #[test]
    fn multicolour_matches_oracle() {
        let g = samples::mostly_negative_four();
        let opts = SolveOptions {
            cuts: CutsOption::Off,
            ..SolveOptions::default()
        };
        for (k, want) in [(1u32, 4.0), (2, 1.0), (3, 0.0)] {
            let r = solve_graph(&g, ModelChoice::MultiColour(k), &opts).unwrap();
            assert_eq!(r.optimum, want, "k={k}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1004);
        for _ in 0..8 {
            let n = rng.gen_range(3..=8);
            let g = random_graph(&mut rng, n, 0.6, 0.6);
            for k in [2u32, 3] {
                let want = brute_force_multicolour(&g, k).unwrap();
                let r = solve_graph(&g, ModelChoice::MultiColour(k), &opts).unwrap();
                assert_eq!(r.optimum, want as f64, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn weighted_model_never_exceeds_the_conjunction_oracle() {
        // the consolidated constraint can admit cheaper completions at
        // fractional weights, so the model optimum lower-bounds the
        // conjunction-semantics enumeration
        let mut rng = ChaCha8Rng::seed_from_u64(1005);
        for _ in 0..6 {
            let n = rng.gen_range(3..=8);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.6) {
                        edges.push((u, v, rng.gen_range(-1.0..=1.0)));
                    }
                }
            }
            let g = SignedGraph::weighted(n, &edges).unwrap();
            let opts = SolveOptions {
                cuts: CutsOption::Off,
                ..SolveOptions::default()
            };
            let r = solve_graph(&g, ModelChoice::Weighted, &opts).unwrap();
            let oracle = brute_force_weighted(&g).unwrap();
            assert!(r.optimum <= oracle + 1e-6);
        }
    }

    #[test]
    fn branch_selection_rules() {
        let g = samples::star(4, 1);
        let mut m = build_xor(&g).unwrap();
        set_branch_priorities(&mut m, &g);
        // hub fractional along with the leaves: highest priority wins
        let mut values = vec![0.5; m.var_count()];
        assert_eq!(branch_select(&values, &m.vars, INT_TOL), Some(0));
        // equal priorities: the value nearest one half wins
        values[0] = 1.0;
        values[1] = 0.3;
        values[2] = 0.5;
        assert_eq!(branch_select(&values, &m.vars, INT_TOL), Some(2));
        // equal priority and equal distance: smallest index
        values[1] = 0.5;
        assert_eq!(branch_select(&values, &m.vars, INT_TOL), Some(1));
        // all integral: nothing to branch on
        let ints = vec![1.0; m.var_count()];
        assert_eq!(branch_select(&ints, &m.vars, INT_TOL), None);
    }

    #[test]
    fn heuristic_descends_to_the_known_optimum() {
        let g = samples::mixed_four();
        // start from the suboptimal colouring with two frustrated edges
        let mut c = Colouring::new(vec![0, 0, 1, 1]);
        descend_two_colour(&g, &mut c);
        assert_eq!(frustration_count(&g, &c).unwrap().count, 1);
    }

    #[test]
    fn heuristic_reaches_zero_on_random_balanced_graphs() {
        // started from a node relaxation point, as in the search itself:
        // on a connected balanced graph the fixed colour propagates exact
        // parities, so rounding is already optimal
        let mut rng = ChaCha8Rng::seed_from_u64(1006);
        let mut tested = 0;
        while tested < 100 {
            let n = rng.gen_range(6..=14);
            // plant a partition and sign edges consistently with it
            let sides: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.6) {
                        let sign = if sides[u] == sides[v] { 1 } else { -1 };
                        edges.push((u, v, sign));
                    }
                }
            }
            let g = SignedGraph::new(n, &edges).unwrap();
            if !connected(&g) {
                continue;
            }
            tested += 1;
            let mut m = build_xor(&g).unwrap();
            crate::model::add_fix_colour(&mut m, &g).unwrap();
            let sol = crate::lp::solve_lp(&m, &[]).unwrap();
            let c = incumbent_heuristic(&g, &sol.values);
            assert_eq!(frustration_count(&g, &c).unwrap().count, 0);
        }
    }

    #[test]
    fn heuristic_output_never_beats_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1009);
        for _ in 0..20 {
            let n = rng.gen_range(4..=10);
            let g = random_graph(&mut rng, n, 0.5, 0.5);
            let (want, _) = brute_force_l(&g).unwrap();
            let start: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let c = incumbent_heuristic(&g, &start);
            assert!(frustration_count(&g, &c).unwrap().count >= want);
        }
    }

    #[test]
    fn separation_pulls_only_violated_cuts() {
        let g = SignedGraph::new(3, &[(0, 1, -1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let mut m = build_xor(&g).unwrap();
        add_triangle_cuts(&mut m, &g, CutMode::Lazy).unwrap();
        // the all-zero point claims no frustration anywhere: violated
        let mut pool = m.cut_pool.clone();
        let x = vec![0.0; m.var_count()];
        let violated = take_violated(&mut pool, &x, CUT_VIOLATION_TOL);
        assert_eq!(violated.len(), 1);
        assert!(pool.is_empty());

        // an integer-feasible completion satisfies every cut
        let mut pool = m.cut_pool.clone();
        let x = crate::model::assignment_for_colouring(&m, &g, &Colouring::new(vec![0, 0, 0]));
        assert!(take_violated(&mut pool, &x, CUT_VIOLATION_TOL).is_empty());
        assert_eq!(pool.len(), 1);
    }

    #[test]
    fn trace_is_monotone_and_closes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1007);
        let g = random_graph(&mut rng, 18, 0.3, 0.5);
        let r = solve_graph(
            &g,
            ModelChoice::Xor,
            &SolveOptions {
                preprocess: false,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        let mut prev_lb = f64::NEG_INFINITY;
        let mut prev_ub = f64::INFINITY;
        for p in &r.trace {
            assert!(p.lower >= prev_lb - 1e-9);
            assert!(p.upper <= prev_ub + 1e-9);
            assert!(p.lower <= p.upper + 1e-9);
            prev_lb = p.lower;
            prev_ub = p.upper;
        }
        let last = r.trace.last().unwrap();
        assert_eq!(last.lower, last.upper);
        assert_eq!(last.upper, r.optimum);
    }

    #[test]
    fn determinism_of_nodes_and_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1008);
        let g = random_graph(&mut rng, 14, 0.5, 0.5);
        let opts = SolveOptions::default();
        let a = solve_graph(&g, ModelChoice::And, &opts).unwrap();
        let b = solve_graph(&g, ModelChoice::And, &opts).unwrap();
        assert_eq!(a.optimum, b.optimum);
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.cuts_added, b.cuts_added);
    }

    #[test]
    fn node_limit_reports_bounded_status() {
        let g = samples::complete_negative(12);
        let r = solve_graph(
            &g,
            ModelChoice::Xor,
            &SolveOptions {
                node_limit: Some(2),
                preprocess: false,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(r.status, SolveStatus::Bounded);
        assert!(r.lower_bound <= r.optimum);
        // the incumbent is still a genuine colouring
        let c = r.incumbent.unwrap();
        assert_eq!(frustration_count(&g, &c).unwrap().count as f64, r.optimum);
    }

    #[test]
    fn nonzero_gap_stops_early_but_within_gap() {
        let g = samples::complete_negative(10);
        let r = solve_graph(
            &g,
            ModelChoice::Xor,
            &SolveOptions {
                gap: 0.25,
                preprocess: false,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert!(r.lower_bound <= r.optimum + 1e-9);
        assert!((r.optimum - r.lower_bound) / r.optimum.max(1.0) <= 0.25 + 1e-9);
        // the true optimum is 20; the incumbent must not beat it
        assert!(r.optimum >= 20.0 - 1e-9);
    }
}
