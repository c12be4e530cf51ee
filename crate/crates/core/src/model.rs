//! 0/1 linear models of the minimum frustration count.
//!
//! Three equivalent formulations are provided for signed graphs, differing
//! in how the frustration state of an edge is linearised:
//!
//! * **AND**: one edge variable `x_ij` standing for `x_i AND x_j`; a
//!   positive edge contributes `x_i + x_j - 2 x_ij`, a negative edge the
//!   complement. `n + m` variables, `2m+ + m-` constraints.
//! * **XOR**: one edge variable `f_ij` bounded below by `±(x_i - x_j)`
//!   (positive edges) or `±(x_i + x_j - 1)` (negative edges). `n + m`
//!   variables, `2m` constraints.
//! * **ABS**: two edge variables with `e_ij - h_ij` equal to the signed
//!   colour difference and `e_ij + h_ij` its absolute value. `n + 2m`
//!   variables, `m` constraints.
//!
//! Extensions: a weighted model over edge weights in [-1, 1] whose single
//! consolidated constraint per edge specialises to the AND constraints at
//! weights ±1, and a multi-colour model with per-colour indicator
//! variables. Speed-ups: fixing the colour of a maximum-degree node,
//! degree-priority branching, and one valid inequality per unbalanced
//! triangle (at least one of its edges is frustrated under any colouring),
//! installable upfront or into a lazy cut pool.

use std::fmt;

use crate::graph::{Colouring, NodeId, SignedGraph};

/// Sparse linear expression plus a constant term.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    /// Accumulate `coef * var`, merging with an existing term.
    pub fn add(&mut self, var: usize, coef: f64) {
        match self.terms.iter_mut().find(|(v, _)| *v == var) {
            Some((_, c)) => *c += coef,
            None => self.terms.push((var, coef)),
        }
    }

    pub fn add_expr(&mut self, other: &LinExpr) {
        for &(v, c) in &other.terms {
            self.add(v, c);
        }
        self.constant += other.constant;
    }

    /// Drop zero coefficients and sort terms by variable.
    pub fn normalised(mut self) -> Self {
        self.terms.retain(|&(_, c)| c != 0.0);
        self.terms.sort_by_key(|&(v, _)| v);
        self
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|&(v, c)| c * x[v]).sum::<f64>()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpSense {
    Le,
    Ge,
    Eq,
}

/// `terms (sense) rhs`; constants live on the right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub terms: Vec<(usize, f64)>,
    pub sense: CmpSense,
    pub rhs: f64,
}

impl Constraint {
    pub fn satisfied(&self, x: &[f64], tol: f64) -> bool {
        let lhs: f64 = self.terms.iter().map(|&(v, c)| c * x[v]).sum();
        match self.sense {
            CmpSense::Le => lhs <= self.rhs + tol,
            CmpSense::Ge => lhs >= self.rhs - tol,
            CmpSense::Eq => (lhs - self.rhs).abs() <= tol,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub integral: bool,
    /// Branching priority; higher branches first.
    pub priority: u64,
}

impl Variable {
    fn binary(name: String) -> Self {
        Variable {
            name,
            lower: 0.0,
            upper: 1.0,
            integral: true,
            priority: 0,
        }
    }

    fn unit_continuous(name: String) -> Self {
        Variable {
            name,
            lower: 0.0,
            upper: 1.0,
            integral: false,
            priority: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    And,
    Xor,
    Abs,
    Weighted,
    MultiColour { k: u32 },
    /// Models read back from an LP file; no colour map.
    Imported,
}

impl ModelKind {
    pub fn name(&self) -> String {
        match self {
            ModelKind::And => "and".into(),
            ModelKind::Xor => "xor".into(),
            ModelKind::Abs => "abs".into(),
            ModelKind::Weighted => "weighted".into(),
            ModelKind::MultiColour { k } => format!("multi{k}"),
            ModelKind::Imported => "imported".into(),
        }
    }
}

/// How model variables map back to node colours.
#[derive(Clone, Debug)]
pub enum ColourMap {
    /// `node_var[i]` is the binary colour of node i.
    Binary { node_var: Vec<usize> },
    /// `var[i * k + c]` is the indicator of node i having colour c.
    PerColour { k: u32, var: Vec<usize> },
    None,
}

/// Abstract 0/1 linear program over the graph.
#[derive(Clone, Debug)]
pub struct IlpModel {
    pub kind: ModelKind,
    pub vars: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Minimised; the constant carries e.g. the Σ1 over negative edges so
    /// reported optima equal the frustration count directly.
    pub objective: LinExpr,
    /// Valid inequalities held aside for lazy separation.
    pub cut_pool: Vec<Constraint>,
    pub colour_map: ColourMap,
    /// Per-edge linear expression whose value equals the frustration state
    /// of the edge, in this model's own variables.
    pub frustration: Vec<LinExpr>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    WeightedGraph,
    BadColourCount(u32),
    EmptyGraph,
    CutsUnsupported { kind: String },
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::WeightedGraph => {
                write!(f, "graph carries weights; use the weighted model")
            }
            ModelError::BadColourCount(k) => write!(f, "colour count {k} must be at least 1"),
            ModelError::EmptyGraph => write!(f, "operation needs at least one node"),
            ModelError::CutsUnsupported { kind } => {
                write!(f, "triangle cuts are only valid for ±1 signs, not for {kind} models")
            }
        }
    }
}

impl std::error::Error for ModelError {}

impl IlpModel {
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    /// Colouring encoded by a variable assignment (rounding node variables;
    /// per-colour maps take the largest indicator).
    pub fn colouring_of(&self, x: &[f64]) -> Option<Colouring> {
        match &self.colour_map {
            ColourMap::Binary { node_var } => Some(Colouring::new(
                node_var
                    .iter()
                    .map(|&v| if x[v] >= 0.5 { 1 } else { 0 })
                    .collect(),
            )),
            ColourMap::PerColour { k, var } => {
                let n = var.len() / *k as usize;
                let mut colours = Vec::with_capacity(n);
                for i in 0..n {
                    let mut best = 0u32;
                    let mut best_val = f64::NEG_INFINITY;
                    for c in 0..*k {
                        let val = x[var[i * *k as usize + c as usize]];
                        if val > best_val + 1e-12 {
                            best_val = val;
                            best = c;
                        }
                    }
                    colours.push(best);
                }
                Some(Colouring::new(colours))
            }
            ColourMap::None => None,
        }
    }
}

fn require_unweighted(g: &SignedGraph) -> Result<(), ModelError> {
    if g.is_weighted() {
        Err(ModelError::WeightedGraph)
    } else {
        Ok(())
    }
}

/// AND model: edge variables stand for the conjunction of endpoint colours.
pub fn build_and(g: &SignedGraph) -> Result<IlpModel, ModelError> {
    require_unweighted(g)?;
    let n = g.node_count();
    let mut vars: Vec<Variable> = (0..n).map(|i| Variable::binary(format!("x_{i}"))).collect();
    let mut objective = LinExpr::new();
    let mut constraints = Vec::new();
    let mut frustration = Vec::with_capacity(g.edge_count());

    for e in g.edges() {
        let ev = vars.len();
        // the conjunction variable is determined by the constraints and
        // objective pressure, so it can stay continuous in [0, 1]
        vars.push(Variable::unit_continuous(format!("x_{}_{}", e.u, e.v)));
        let mut fexpr = LinExpr::new();
        if e.sign > 0 {
            objective.add(e.u, 1.0);
            objective.add(e.v, 1.0);
            objective.add(ev, -2.0);
            constraints.push(Constraint {
                terms: vec![(ev, 1.0), (e.u, -1.0)],
                sense: CmpSense::Le,
                rhs: 0.0,
            });
            constraints.push(Constraint {
                terms: vec![(ev, 1.0), (e.v, -1.0)],
                sense: CmpSense::Le,
                rhs: 0.0,
            });
            fexpr.add(e.u, 1.0);
            fexpr.add(e.v, 1.0);
            fexpr.add(ev, -2.0);
        } else {
            objective.constant += 1.0;
            objective.add(e.u, -1.0);
            objective.add(e.v, -1.0);
            objective.add(ev, 2.0);
            constraints.push(Constraint {
                terms: vec![(e.u, 1.0), (e.v, 1.0), (ev, -1.0)],
                sense: CmpSense::Le,
                rhs: 1.0,
            });
            fexpr.constant = 1.0;
            fexpr.add(e.u, -1.0);
            fexpr.add(e.v, -1.0);
            fexpr.add(ev, 2.0);
        }
        frustration.push(fexpr);
    }

    Ok(IlpModel {
        kind: ModelKind::And,
        vars,
        constraints,
        objective: objective.normalised(),
        cut_pool: Vec::new(),
        colour_map: ColourMap::Binary {
            node_var: (0..n).collect(),
        },
        frustration,
    })
}

/// XOR model: one frustration variable per edge, bounded below on both sides.
pub fn build_xor(g: &SignedGraph) -> Result<IlpModel, ModelError> {
    require_unweighted(g)?;
    let n = g.node_count();
    let mut vars: Vec<Variable> = (0..n).map(|i| Variable::binary(format!("x_{i}"))).collect();
    let mut objective = LinExpr::new();
    let mut constraints = Vec::new();
    let mut frustration = Vec::with_capacity(g.edge_count());

    for e in g.edges() {
        let f = vars.len();
        // dependent through the constraints and objective pressure
        vars.push(Variable::unit_continuous(format!("f_{}_{}", e.u, e.v)));
        objective.add(f, 1.0);
        if e.sign > 0 {
            constraints.push(Constraint {
                terms: vec![(f, 1.0), (e.u, -1.0), (e.v, 1.0)],
                sense: CmpSense::Ge,
                rhs: 0.0,
            });
            constraints.push(Constraint {
                terms: vec![(f, 1.0), (e.v, -1.0), (e.u, 1.0)],
                sense: CmpSense::Ge,
                rhs: 0.0,
            });
        } else {
            constraints.push(Constraint {
                terms: vec![(f, 1.0), (e.u, -1.0), (e.v, -1.0)],
                sense: CmpSense::Ge,
                rhs: -1.0,
            });
            constraints.push(Constraint {
                terms: vec![(f, 1.0), (e.u, 1.0), (e.v, 1.0)],
                sense: CmpSense::Ge,
                rhs: 1.0,
            });
        }
        let mut fexpr = LinExpr::new();
        fexpr.add(f, 1.0);
        frustration.push(fexpr);
    }

    Ok(IlpModel {
        kind: ModelKind::Xor,
        vars,
        constraints,
        objective: objective.normalised(),
        cut_pool: Vec::new(),
        colour_map: ColourMap::Binary {
            node_var: (0..n).collect(),
        },
        frustration,
    })
}

/// ABS model: `e - h` carries the signed colour difference, `e + h` its
/// absolute value.
pub fn build_abs(g: &SignedGraph) -> Result<IlpModel, ModelError> {
    require_unweighted(g)?;
    let n = g.node_count();
    let mut vars: Vec<Variable> = (0..n).map(|i| Variable::binary(format!("x_{i}"))).collect();
    let mut objective = LinExpr::new();
    let mut constraints = Vec::new();
    let mut frustration = Vec::with_capacity(g.edge_count());

    for e in g.edges() {
        let ev = vars.len();
        vars.push(Variable::binary(format!("e_{}_{}", e.u, e.v)));
        let hv = vars.len();
        vars.push(Variable::binary(format!("h_{}_{}", e.u, e.v)));
        objective.add(ev, 1.0);
        objective.add(hv, 1.0);
        let rhs = if e.sign > 0 { 0.0 } else { 1.0 };
        let vsign = if e.sign > 0 { -1.0 } else { 1.0 };
        constraints.push(Constraint {
            terms: vec![(e.u, 1.0), (e.v, vsign), (ev, -1.0), (hv, 1.0)],
            sense: CmpSense::Eq,
            rhs,
        });
        let mut fexpr = LinExpr::new();
        fexpr.add(ev, 1.0);
        fexpr.add(hv, 1.0);
        frustration.push(fexpr);
    }

    Ok(IlpModel {
        kind: ModelKind::Abs,
        vars,
        constraints,
        objective: objective.normalised(),
        cut_pool: Vec::new(),
        colour_map: ColourMap::Binary {
            node_var: (0..n).collect(),
        },
        frustration,
    })
}

/// Weighted model over edge weights in [-1, 1]. One consolidated constraint
/// per edge specialises to the AND constraints at weights ±1; the edge
/// variables stay binary.
pub fn build_weighted(g: &SignedGraph) -> Result<IlpModel, ModelError> {
    let n = g.node_count();
    let mut vars: Vec<Variable> = (0..n).map(|i| Variable::binary(format!("x_{i}"))).collect();
    let mut objective = LinExpr::new();
    let mut constraints = Vec::new();
    let mut frustration = Vec::with_capacity(g.edge_count());

    for (idx, e) in g.edges().iter().enumerate() {
        let w = g.edge_weight(idx);
        let ev = vars.len();
        vars.push(Variable::binary(format!("x_{}_{}", e.u, e.v)));
        objective.constant += (1.0 - w) / 2.0;
        objective.add(e.u, w);
        objective.add(e.v, w);
        objective.add(ev, -2.0 * w);
        let c = (3.0 * w - 1.0) / 4.0;
        constraints.push(Constraint {
            terms: vec![(ev, w), (e.u, -c), (e.v, -c)],
            sense: CmpSense::Le,
            rhs: (1.0 - w) / 2.0,
        });
        let mut fexpr = LinExpr::new();
        fexpr.constant = (1.0 - w) / 2.0;
        fexpr.add(e.u, w);
        fexpr.add(e.v, w);
        fexpr.add(ev, -2.0 * w);
        frustration.push(fexpr);
    }

    Ok(IlpModel {
        kind: ModelKind::Weighted,
        vars,
        constraints,
        objective: objective.normalised(),
        cut_pool: Vec::new(),
        colour_map: ColourMap::Binary {
            node_var: (0..n).collect(),
        },
        frustration,
    })
}

/// Multi-colour model: per-colour indicators with one assignment row per
/// node; an edge is frustrated when no colour satisfies it.
pub fn build_multicolour(g: &SignedGraph, k: u32) -> Result<IlpModel, ModelError> {
    require_unweighted(g)?;
    if k < 1 {
        return Err(ModelError::BadColourCount(k));
    }
    let n = g.node_count();
    let ku = k as usize;
    let mut vars: Vec<Variable> = Vec::with_capacity(n * ku + g.edge_count());
    for i in 0..n {
        for c in 0..k {
            vars.push(Variable::binary(format!("x_{i}_c{c}")));
        }
    }
    let mut constraints = Vec::new();
    for i in 0..n {
        constraints.push(Constraint {
            terms: (0..ku).map(|c| (i * ku + c, 1.0)).collect(),
            sense: CmpSense::Eq,
            rhs: 1.0,
        });
    }
    let mut objective = LinExpr::new();
    let mut frustration = Vec::with_capacity(g.edge_count());
    for e in g.edges() {
        let f = vars.len();
        vars.push(Variable::binary(format!("f_{}_{}", e.u, e.v)));
        objective.add(f, 1.0);
        for c in 0..ku {
            if e.sign > 0 {
                constraints.push(Constraint {
                    terms: vec![(f, 1.0), (e.u * ku + c, -1.0), (e.v * ku + c, 1.0)],
                    sense: CmpSense::Ge,
                    rhs: 0.0,
                });
            } else {
                constraints.push(Constraint {
                    terms: vec![(f, 1.0), (e.u * ku + c, -1.0), (e.v * ku + c, -1.0)],
                    sense: CmpSense::Ge,
                    rhs: -1.0,
                });
            }
        }
        let mut fexpr = LinExpr::new();
        fexpr.add(f, 1.0);
        frustration.push(fexpr);
    }

    Ok(IlpModel {
        kind: ModelKind::MultiColour { k },
        vars,
        constraints,
        objective: objective.normalised(),
        cut_pool: Vec::new(),
        colour_map: ColourMap::PerColour {
            k,
            var: (0..n * ku).collect(),
        },
        frustration,
    })
}

/// Fix the colour of the maximum-degree node (ties to the smallest id),
/// breaking the global flip symmetry. Implemented by tightening the
/// variable's bounds so model-size identities are unaffected. Returns the
/// fixed node.
pub fn add_fix_colour(model: &mut IlpModel, g: &SignedGraph) -> Result<NodeId, ModelError> {
    let k = g.max_degree_node().ok_or(ModelError::EmptyGraph)?;
    match &model.colour_map {
        ColourMap::Binary { node_var } => {
            let v = node_var[k];
            model.vars[v].lower = 1.0;
        }
        ColourMap::PerColour { k: kc, var } => {
            // fixing one colour, not the complement: symmetry here is over
            // colour permutations
            let v = var[k * *kc as usize];
            model.vars[v].lower = 1.0;
        }
        ColourMap::None => return Err(ModelError::EmptyGraph),
    }
    Ok(k)
}

/// Where triangle inequalities go.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutMode {
    /// Appended to the constraint set before solving.
    Upfront,
    /// Held in the pool and pulled in only when violated.
    Lazy,
}

/// One valid inequality per unbalanced triangle: the frustration states of
/// its three edges sum to at least 1. The states are expressed through
/// each model's own variables.
pub fn add_triangle_cuts(
    model: &mut IlpModel,
    g: &SignedGraph,
    mode: CutMode,
) -> Result<usize, ModelError> {
    match model.kind {
        ModelKind::And | ModelKind::Xor | ModelKind::Abs => {}
        other => {
            return Err(ModelError::CutsUnsupported { kind: other.name() })
        }
    }
    let triangles = g.unbalanced_triangles();
    let count = triangles.len();
    for (i, j, k) in triangles {
        let mut expr = LinExpr::new();
        for (a, b) in [(i, j), (i, k), (j, k)] {
            let eidx = g.edge_between(a, b).expect("triangle edge exists");
            expr.add_expr(&model.frustration[eidx]);
        }
        let expr = expr.normalised();
        let cut = Constraint {
            rhs: 1.0 - expr.constant,
            terms: expr.terms,
            sense: CmpSense::Ge,
        };
        match mode {
            CutMode::Upfront => model.constraints.push(cut),
            CutMode::Lazy => model.cut_pool.push(cut),
        }
    }
    Ok(count)
}

/// Give every node variable a branching priority equal to its degree;
/// edge and auxiliary variables keep priority 0.
pub fn set_branch_priorities(model: &mut IlpModel, g: &SignedGraph) {
    match &model.colour_map {
        ColourMap::Binary { node_var } => {
            for (i, &v) in node_var.iter().enumerate() {
                model.vars[v].priority = g.degree(i) as u64;
            }
        }
        ColourMap::PerColour { k, var } => {
            let ku = *k as usize;
            for (pos, &v) in var.iter().enumerate() {
                model.vars[v].priority = g.degree(pos / ku) as u64;
            }
        }
        ColourMap::None => {}
    }
}

/// Complete a colouring to a full model assignment: node variables carry
/// the colours and each edge variable takes its model-consistent value
/// (for the weighted model, the feasible binary value minimising the
/// objective).
pub fn assignment_for_colouring(model: &IlpModel, g: &SignedGraph, x: &Colouring) -> Vec<f64> {
    let mut vals = vec![0.0; model.vars.len()];
    match (&model.kind, &model.colour_map) {
        (ModelKind::MultiColour { k }, ColourMap::PerColour { var, .. }) => {
            let ku = *k as usize;
            for i in 0..x.len() {
                for c in 0..ku {
                    vals[var[i * ku + c]] = if x.colour(i) == c as u32 { 1.0 } else { 0.0 };
                }
            }
            // f variables come after the indicators, one per edge
            let base = x.len() * ku;
            for (idx, e) in g.edges().iter().enumerate() {
                let same = x.colour(e.u) == x.colour(e.v);
                let f = if e.sign > 0 { !same } else { same };
                vals[base + idx] = if f { 1.0 } else { 0.0 };
            }
        }
        (_, ColourMap::Binary { node_var }) => {
            for i in 0..x.len() {
                vals[node_var[i]] = f64::from(x.colour(i).min(1));
            }
            let n = x.len();
            let mut next = n;
            for (idx, e) in g.edges().iter().enumerate() {
                let (xi, xj) = (vals[e.u], vals[e.v]);
                match model.kind {
                    ModelKind::And => {
                        vals[next] = xi.min(xj);
                        next += 1;
                    }
                    ModelKind::Xor => {
                        let d = (xi - xj).abs();
                        vals[next] = if g.edges()[idx].sign > 0 { d } else { 1.0 - d };
                        next += 1;
                    }
                    ModelKind::Abs => {
                        let diff = if g.edges()[idx].sign > 0 {
                            xi - xj
                        } else {
                            xi + xj - 1.0
                        };
                        vals[next] = diff.max(0.0);
                        vals[next + 1] = (-diff).max(0.0);
                        next += 2;
                    }
                    ModelKind::Weighted => {
                        let w = g.edge_weight(idx);
                        // feasible binary values of the edge variable under
                        // the consolidated constraint
                        let feasible = |v: f64| {
                            w * v <= (3.0 * w - 1.0) * (xi + xj) / 4.0 + (1.0 - w) / 2.0 + 1e-9
                        };
                        let mut best = f64::INFINITY;
                        let mut pick = 0.0;
                        for v in [0.0, 1.0] {
                            if feasible(v) {
                                let obj = -2.0 * w * v;
                                if obj < best {
                                    best = obj;
                                    pick = v;
                                }
                            }
                        }
                        vals[next] = pick;
                        next += 1;
                    }
                    _ => unreachable!("binary colour map covers these kinds"),
                }
            }
        }
        _ => {}
    }
    vals
}

/// Objective value of the model at the completion of `x`. For the three
/// signed models this equals the frustration count of `x`.
pub fn model_value(model: &IlpModel, g: &SignedGraph, x: &Colouring) -> f64 {
    let vals = assignment_for_colouring(model, g, x);
    model.objective.value(&vals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::frustration_count;
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

    #[test]
    fn model_sizes_match_the_accounting() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(2..=14);
            let p = rng.gen_range(0.1..0.9);
            let g = random_graph(&mut rng, n, p, 0.5);
            let (m, mp, mn) = (g.edge_count(), g.positive_count(), g.negative_count());
            let and = build_and(&g).unwrap();
            assert_eq!(and.var_count(), n + m);
            assert_eq!(and.constraint_count(), 2 * mp + mn);
            let xor = build_xor(&g).unwrap();
            assert_eq!(xor.var_count(), n + m);
            assert_eq!(xor.constraint_count(), 2 * m);
            let abs = build_abs(&g).unwrap();
            assert_eq!(abs.var_count(), n + 2 * m);
            assert_eq!(abs.constraint_count(), m);
            // every constraint touches at most 4 variables
            for c in and
                .constraints
                .iter()
                .chain(&xor.constraints)
                .chain(&abs.constraints)
            {
                assert!(c.terms.len() <= 4);
            }
        }
    }

    #[test]
    fn and_objective_constant_is_negative_edge_count() {
        let g = samples::mixed_four();
        let m = build_and(&g).unwrap();
        assert_eq!(m.objective.constant, g.negative_count() as f64);
    }

    #[test]
    fn model_value_equals_frustration_count() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let n = rng.gen_range(2..=10);
            let g = random_graph(&mut rng, n, 0.5, 0.5);
            let colours: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            let x = Colouring::new(colours);
            let expect = frustration_count(&g, &x).unwrap().count as f64;
            for m in [
                build_and(&g).unwrap(),
                build_xor(&g).unwrap(),
                build_abs(&g).unwrap(),
            ] {
                assert!((model_value(&m, &g, &x) - expect).abs() < 1e-9);
                // the completion is feasible
                let vals = assignment_for_colouring(&m, &g, &x);
                for c in &m.constraints {
                    assert!(c.satisfied(&vals, 1e-9));
                }
                // per-edge frustration expressions match the edge states
                let states = frustration_count(&g, &x).unwrap().frustrated;
                for (idx, fexpr) in m.frustration.iter().enumerate() {
                    let want = if states[idx] { 1.0 } else { 0.0 };
                    assert!((fexpr.value(&vals) - want).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn weighted_constraint_matches_and_at_unit_weights() {
        // at w = ±1 the consolidated constraint admits exactly the AND
        // integer points
        for w in [1.0f64, -1.0] {
            for xi in [0.0, 1.0] {
                for xj in [0.0, 1.0] {
                    for xij in [0.0, 1.0] {
                        let consolidated =
                            w * xij <= (3.0 * w - 1.0) * (xi + xj) / 4.0 + (1.0 - w) / 2.0 + 1e-12;
                        let and_feasible = if w > 0.0 {
                            xij <= xi + 1e-12 && xij <= xj + 1e-12
                        } else {
                            xij >= xi + xj - 1.0 - 1e-12
                        };
                        assert_eq!(consolidated, and_feasible, "w={w} x=({xi},{xj},{xij})");
                    }
                }
            }
        }
    }

    #[test]
    fn fix_colour_targets_max_degree_node() {
        let g = samples::star(5, 1);
        let mut m = build_xor(&g).unwrap();
        let k = add_fix_colour(&mut m, &g).unwrap();
        assert_eq!(k, 0);
        assert_eq!(m.vars[0].lower, 1.0);
        // constraint count unchanged by fixing
        assert_eq!(m.constraint_count(), 2 * g.edge_count());

        let empty = SignedGraph::new(0, &[]).unwrap();
        let mut me = build_xor(&empty).unwrap();
        assert!(matches!(
            add_fix_colour(&mut me, &empty),
            Err(ModelError::EmptyGraph)
        ));
    }

    #[test]
    fn triangle_cut_counts() {
        let g = SignedGraph::new(3, &[(0, 1, -1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let mut m = build_xor(&g).unwrap();
        assert_eq!(add_triangle_cuts(&mut m, &g, CutMode::Upfront).unwrap(), 1);
        assert_eq!(m.constraint_count(), 2 * 3 + 1);

        let balanced = samples::complete(4, 1);
        let mut m = build_and(&balanced).unwrap();
        assert_eq!(add_triangle_cuts(&mut m, &balanced, CutMode::Lazy).unwrap(), 0);
        assert!(m.cut_pool.is_empty());

        let k4 = samples::complete_negative(4);
        let mut m = build_abs(&k4).unwrap();
        assert_eq!(add_triangle_cuts(&mut m, &k4, CutMode::Lazy).unwrap(), 4);
        assert_eq!(m.cut_pool.len(), 4);

        let mut wm = build_weighted(&k4).unwrap();
        assert!(matches!(
            add_triangle_cuts(&mut wm, &k4, CutMode::Lazy),
            Err(ModelError::CutsUnsupported { .. })
        ));
    }

    #[test]
    fn cuts_hold_for_every_colouring() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..15 {
            let n = rng.gen_range(3..=8);
            let g = random_graph(&mut rng, n, 0.6, 0.5);
            for mut m in [
                build_and(&g).unwrap(),
                build_xor(&g).unwrap(),
                build_abs(&g).unwrap(),
            ] {
                add_triangle_cuts(&mut m, &g, CutMode::Lazy).unwrap();
                for mask in 0..(1u32 << n) {
                    let colours: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
                    let vals = assignment_for_colouring(&m, &g, &Colouring::new(colours));
                    for cut in &m.cut_pool {
                        assert!(cut.satisfied(&vals, 1e-9));
                    }
                }
            }
        }
    }

    #[test]
    fn priorities_follow_degrees() {
        let g = samples::star(4, 1);
        let mut m = build_abs(&g).unwrap();
        set_branch_priorities(&mut m, &g);
        assert_eq!(m.vars[0].priority, 4);
        for leaf in 1..=4 {
            assert_eq!(m.vars[leaf].priority, 1);
        }
        for v in g.node_count()..m.var_count() {
            assert_eq!(m.vars[v].priority, 0);
        }
    }

    #[test]
    fn multicolour_shapes() {
        let g = samples::mostly_negative_four();
        let m = build_multicolour(&g, 3).unwrap();
        assert_eq!(m.var_count(), 4 * 3 + 5);
        assert_eq!(m.constraint_count(), 4 + 5 * 3);
        assert!(matches!(
            build_multicolour(&g, 0),
            Err(ModelError::BadColourCount(0))
        ));
    }
}
