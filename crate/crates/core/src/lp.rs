//! Bounded-variable revised simplex over the unit box.
//!
//! The solver keeps a product-form basis inverse (one eta per pivot,
//! periodic refactorisation) and works dual-first: a fresh basis places
//! every nonbasic variable on the bound matching its reduced-cost sign,
//! which is dual feasible for any objective, and bound tightenings or row
//! additions never break dual feasibility, so re-solves inside branch and
//! bound are warm dual-simplex runs. A primal loop covers the residual
//! case of reduced costs drifting past tolerance after refactorisation.
//!
//! Ties in every selection rule break by smallest index, so identical
//! inputs give identical runs.

use std::fmt;

use crate::model::{CmpSense, Constraint, IlpModel};

#[derive(Clone, Copy, Debug)]
pub struct LpConfig {
    /// Primal feasibility tolerance on variable bounds.
    pub feas_tol: f64,
    /// Dual feasibility (reduced cost) tolerance.
    pub dual_tol: f64,
    /// Smallest acceptable pivot magnitude.
    pub pivot_tol: f64,
    /// Degenerate pivots tolerated before switching to smallest-index rules.
    pub stall_threshold: u32,
    /// Pivots between refactorisations.
    pub refactor_interval: u32,
    pub max_iters: u64,
}

impl Default for LpConfig {
    fn default() -> Self {
        LpConfig {
            feas_tol: 1e-7,
            dual_tol: 1e-7,
            pivot_tol: 1e-8,
            stall_threshold: 400,
            refactor_interval: 120,
            max_iters: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// Result of one relaxation solve.
#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective including the model's constant term (meaningless when
    /// infeasible).
    pub objective: f64,
    /// Structural variable values.
    pub values: Vec<f64>,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    IterationLimit,
    Unbounded,
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::IterationLimit => write!(f, "simplex iteration limit reached"),
            LpError::Unbounded => write!(f, "objective unbounded; model is malformed"),
        }
    }
}

impl std::error::Error for LpError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum VStat {
    Basic(u32),
    AtLower,
    AtUpper,
}

/// Product-form eta: the transformed entering column with its pivot row.
#[derive(Clone, Debug)]
struct Eta {
    r: u32,
    pivot: f64,
    /// off-pivot nonzeros (row, value)
    off: Vec<(u32, f64)>,
}

/// Opaque warm-start handle: a basis snapshot.
#[derive(Clone, Debug)]
pub struct BasisHandle {
    basic: Vec<u32>,
    vstat: Vec<VStat>,
}

/// Incremental simplex instance tied to one model's columns.
pub struct Simplex {
    config: LpConfig,
    nstruct: usize,
    obj_constant: f64,
    /// structural objective coefficients
    obj: Vec<f64>,
    /// structural columns (row, coef), rows ascending
    cols: Vec<Vec<(u32, f64)>>,
    /// rows over structural columns only (col, coef)
    rows: Vec<Vec<(u32, f64)>>,
    rhs: Vec<f64>,
    /// base bounds (model bounds for structurals, sense bounds for slacks)
    base_lower: Vec<f64>,
    base_upper: Vec<f64>,
    /// working bounds including branching overrides
    lower: Vec<f64>,
    upper: Vec<f64>,
    vstat: Vec<VStat>,
    basic: Vec<u32>,
    x: Vec<f64>,
    d: Vec<f64>,
    etas: Vec<Eta>,
    factored: bool,
    xb_stale: bool,
    pivots_since_refactor: u32,
    stall: u32,
    iterations: u64,
    // scratch
    work: Vec<f64>,
    alpha: Vec<f64>,
    touched: Vec<u32>,
}

impl Simplex {
    pub fn new(model: &IlpModel, config: LpConfig) -> Self {
        let nstruct = model.vars.len();
        let mut obj = vec![0.0; nstruct];
        for &(v, c) in &model.objective.terms {
            obj[v] += c;
        }
        let mut s = Simplex {
            config,
            nstruct,
            obj_constant: model.objective.constant,
            obj,
            cols: vec![Vec::new(); nstruct],
            rows: Vec::new(),
            rhs: Vec::new(),
            base_lower: model.vars.iter().map(|v| v.lower).collect(),
            base_upper: model.vars.iter().map(|v| v.upper).collect(),
            lower: model.vars.iter().map(|v| v.lower).collect(),
            upper: model.vars.iter().map(|v| v.upper).collect(),
            vstat: Vec::new(),
            basic: Vec::new(),
            x: Vec::new(),
            d: Vec::new(),
            etas: Vec::new(),
            factored: false,
            xb_stale: true,
            pivots_since_refactor: 0,
            stall: 0,
            iterations: 0,
            work: Vec::new(),
            alpha: vec![0.0; nstruct],
            touched: Vec::new(),
        };
        for c in &model.constraints {
            s.push_row(c);
        }
        s.reset_basis();
        s
    }

    fn nrows(&self) -> usize {
        self.rhs.len()
    }

    fn ntotal(&self) -> usize {
        self.nstruct + self.nrows()
    }

    fn push_row(&mut self, c: &Constraint) {
        let r = self.rhs.len() as u32;
        let mut row = Vec::with_capacity(c.terms.len());
        for &(v, coef) in &c.terms {
            debug_assert!(v < self.nstruct);
            if coef != 0.0 {
                self.cols[v].push((r, coef));
                row.push((v as u32, coef));
            }
        }
        row.sort_unstable_by_key(|&(v, _)| v);
        self.rows.push(row);
        self.rhs.push(c.rhs);
        let (lo, up) = match c.sense {
            CmpSense::Le => (0.0, f64::INFINITY),
            CmpSense::Ge => (f64::NEG_INFINITY, 0.0),
            CmpSense::Eq => (0.0, 0.0),
        };
        self.base_lower.push(lo);
        self.base_upper.push(up);
        self.lower.push(lo);
        self.upper.push(up);
    }

    /// Discard the basis: slacks basic, structurals on the bound matching
    /// their objective sign. Dual feasible by construction.
    fn reset_basis(&mut self) {
        let nrows = self.nrows();
        self.basic = (0..nrows).map(|r| (self.nstruct + r) as u32).collect();
        self.vstat = vec![VStat::AtLower; self.ntotal()];
        for j in 0..self.nstruct {
            self.vstat[j] = if self.obj[j] >= 0.0 {
                VStat::AtLower
            } else {
                VStat::AtUpper
            };
        }
        for r in 0..nrows {
            self.vstat[self.nstruct + r] = VStat::Basic(r as u32);
        }
        self.etas.clear();
        self.factored = true;
        self.pivots_since_refactor = 0;
        self.recompute_primal();
        self.recompute_duals();
    }

    /// Tighten or restore the working bounds of a structural variable.
    pub fn set_bounds(&mut self, var: usize, lo: f64, up: f64) {
        self.lower[var] = lo;
        self.upper[var] = up;
        match self.vstat[var] {
            VStat::AtLower | VStat::AtUpper => self.xb_stale = true,
            VStat::Basic(_) => {}
        }
    }

    pub fn base_bounds(&self, var: usize) -> (f64, f64) {
        (self.base_lower[var], self.base_upper[var])
    }

    pub fn bounds(&self, var: usize) -> (f64, f64) {
        (self.lower[var], self.upper[var])
    }

    /// Append rows (cuts); their slacks enter the basis, so dual
    /// feasibility is preserved and the next solve is warm.
    pub fn add_rows(&mut self, cuts: &[Constraint]) {
        if cuts.is_empty() {
            return;
        }
        let first_new = self.nrows();
        for c in cuts {
            self.push_row(c);
            self.vstat.push(VStat::AtLower); // placeholder, becomes basic below
        }
        for r in first_new..self.nrows() {
            let slack = (self.nstruct + r) as u32;
            self.basic.push(slack);
            self.vstat[slack as usize] = VStat::Basic(r as u32);
        }
        // old etas act on a shorter vector; rebuild from scratch
        self.factored = false;
    }

    pub fn value(&self, var: usize) -> f64 {
        self.x[var]
    }

    pub fn structural_values(&self) -> &[f64] {
        &self.x[..self.nstruct]
    }

    pub fn reduced_cost(&self, var: usize) -> f64 {
        self.d[var]
    }

    pub fn is_basic(&self, var: usize) -> bool {
        matches!(self.vstat[var], VStat::Basic(_))
    }

    pub fn objective_value(&self) -> f64 {
        self.obj_constant
            + (0..self.nstruct)
                .map(|j| self.obj[j] * self.x[j])
                .sum::<f64>()
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn basis(&self) -> BasisHandle {
        BasisHandle {
            basic: self.basic.clone(),
            vstat: self.vstat.clone(),
        }
    }

    /// Restore a snapshot taken on this instance. Rows added after the
    /// snapshot keep their own slack basic.
    pub fn load_basis(&mut self, handle: &BasisHandle) {
        if handle.vstat.len() > self.ntotal() || handle.basic.len() > self.nrows() {
            return; // stale handle from a different shape; keep current basis
        }
        for (var, &st) in handle.vstat.iter().enumerate() {
            self.vstat[var] = st;
        }
        let old_rows = handle.basic.len();
        for r in 0..old_rows {
            self.basic[r] = handle.basic[r];
        }
        for r in old_rows..self.nrows() {
            let slack = (self.nstruct + r) as u32;
            self.basic[r] = slack;
            self.vstat[slack as usize] = VStat::Basic(r as u32);
        }
        self.factored = false;
    }

    // ---- factorisation ----------------------------------------------------

    fn apply_etas(etas: &[Eta], v: &mut [f64]) {
        for eta in etas {
            let t = v[eta.r as usize] / eta.pivot;
            if t != 0.0 {
                v[eta.r as usize] = t;
                for &(i, w) in &eta.off {
                    v[i as usize] -= w * t;
                }
            }
        }
    }

    fn apply_etas_transposed(etas: &[Eta], v: &mut [f64]) {
        for eta in etas.iter().rev() {
            let mut s = v[eta.r as usize];
            for &(i, w) in &eta.off {
                s -= w * v[i as usize];
            }
            v[eta.r as usize] = s / eta.pivot;
        }
    }

    fn scatter_column(&self, var: usize, out: &mut [f64]) {
        if var >= self.nstruct {
            out[var - self.nstruct] = 1.0;
        } else {
            for &(r, c) in &self.cols[var] {
                out[r as usize] = c;
            }
        }
    }

    /// Rebuild the eta file for the current basic set. On numerical
    /// failure fall back to the all-slack basis.
    fn refactor(&mut self) {
        let nrows = self.nrows();
        self.etas.clear();
        self.pivots_since_refactor = 0;

        let mut order: Vec<u32> = self.basic.clone();
        order.sort_unstable_by_key(|&v| {
            let nnz = if (v as usize) >= self.nstruct {
                0
            } else {
                self.cols[v as usize].len()
            };
            (nnz, v)
        });

        let mut claimed = vec![false; nrows];
        let mut new_basic = vec![u32::MAX; nrows];
        let mut w = vec![0.0; nrows];
        for &var in &order {
            for e in w.iter_mut() {
                *e = 0.0;
            }
            self.scatter_column(var as usize, &mut w);
            Self::apply_etas(&self.etas, &mut w);
            let mut best_r = usize::MAX;
            let mut best = 1e-9;
            for (r, &val) in w.iter().enumerate() {
                if !claimed[r] && val.abs() > best {
                    best = val.abs();
                    best_r = r;
                }
            }
            if best_r == usize::MAX {
                // dependent column: the recorded basis is numerically
                // singular; restart from scratch
                self.reset_basis();
                return;
            }
            claimed[best_r] = true;
            new_basic[best_r] = var;
            self.vstat[var as usize] = VStat::Basic(best_r as u32);
            let pivot = w[best_r];
            let off: Vec<(u32, f64)> = w
                .iter()
                .enumerate()
                .filter(|&(r, &v)| r != best_r && v.abs() > 1e-12)
                .map(|(r, &v)| (r as u32, v))
                .collect();
            if off.is_empty() && (pivot - 1.0).abs() < 1e-12 {
                continue; // identity column: no eta needed
            }
            self.etas.push(Eta {
                r: best_r as u32,
                pivot,
                off,
            });
        }
        self.basic = new_basic;
        self.factored = true;
        self.recompute_primal();
        self.recompute_duals();
    }

    fn recompute_primal(&mut self) {
        let nrows = self.nrows();
        self.x = vec![0.0; self.ntotal()];
        for j in 0..self.ntotal() {
            match self.vstat[j] {
                VStat::AtLower => self.x[j] = finite_or(self.lower[j], self.upper[j]),
                VStat::AtUpper => self.x[j] = finite_or(self.upper[j], self.lower[j]),
                VStat::Basic(_) => {}
            }
        }
        let mut v = self.rhs.clone();
        for j in 0..self.ntotal() {
            if matches!(self.vstat[j], VStat::Basic(_)) {
                continue;
            }
            let xj = self.x[j];
            if xj == 0.0 {
                continue;
            }
            if j >= self.nstruct {
                v[j - self.nstruct] -= xj;
            } else {
                for &(r, c) in &self.cols[j] {
                    v[r as usize] -= c * xj;
                }
            }
        }
        Self::apply_etas(&self.etas, &mut v);
        for r in 0..nrows {
            self.x[self.basic[r] as usize] = v[r];
        }
        self.xb_stale = false;
    }

    fn recompute_duals(&mut self) {
        let nrows = self.nrows();
        let mut y = vec![0.0; nrows];
        for r in 0..nrows {
            let b = self.basic[r] as usize;
            y[r] = if b < self.nstruct { self.obj[b] } else { 0.0 };
        }
        Self::apply_etas_transposed(&self.etas, &mut y);
        self.d = vec![0.0; self.ntotal()];
        for j in 0..self.nstruct {
            if matches!(self.vstat[j], VStat::Basic(_)) {
                continue;
            }
            let mut dj = self.obj[j];
            for &(r, c) in &self.cols[j] {
                dj -= y[r as usize] * c;
            }
            self.d[j] = dj;
        }
        for r in 0..nrows {
            let slack = self.nstruct + r;
            if !matches!(self.vstat[slack], VStat::Basic(_)) {
                self.d[slack] = -y[r];
            }
        }
    }

    // ---- solve ------------------------------------------------------------

    /// Re-optimise from the current basis.
    pub fn solve(&mut self) -> Result<LpStatus, LpError> {
        if !self.factored {
            self.refactor();
        } else if self.xb_stale {
            self.recompute_primal();
        }
        self.stall = 0;
        self.repair_dual_by_flips();

        let mut rounds = 0;
        loop {
            match self.dual_loop()? {
                LpStatus::Infeasible => return Ok(LpStatus::Infeasible),
                LpStatus::Optimal => {}
            }
            if self.dual_feasible() {
                return Ok(LpStatus::Optimal);
            }
            rounds += 1;
            if rounds > 4 {
                return Err(LpError::IterationLimit);
            }
            self.primal_loop()?;
            if self.primal_feasible() {
                return Ok(LpStatus::Optimal);
            }
        }
    }

    /// Nonbasic variables whose reduced cost points past their bound are
    /// moved to the opposite bound when it is finite.
    fn repair_dual_by_flips(&mut self) {
        let mut flipped = false;
        for j in 0..self.ntotal() {
            if self.lower[j] >= self.upper[j] {
                continue; // fixed: any sign is fine
            }
            match self.vstat[j] {
                VStat::AtLower if self.d[j] < -self.config.dual_tol => {
                    if self.upper[j].is_finite() {
                        self.vstat[j] = VStat::AtUpper;
                        flipped = true;
                    }
                }
                VStat::AtUpper if self.d[j] > self.config.dual_tol => {
                    if self.lower[j].is_finite() {
                        self.vstat[j] = VStat::AtLower;
                        flipped = true;
                    }
                }
                _ => {}
            }
        }
        if flipped {
            self.recompute_primal();
        }
    }

    fn primal_feasible(&self) -> bool {
        let tol = self.config.feas_tol;
        self.basic.iter().all(|&b| {
            let b = b as usize;
            self.x[b] >= self.lower[b] - tol && self.x[b] <= self.upper[b] + tol
        })
    }

    fn dual_feasible(&self) -> bool {
        let tol = 10.0 * self.config.dual_tol;
        (0..self.ntotal()).all(|j| {
            if self.lower[j] >= self.upper[j] {
                return true;
            }
            match self.vstat[j] {
                VStat::Basic(_) => true,
                VStat::AtLower => self.d[j] >= -tol,
                VStat::AtUpper => self.d[j] <= tol,
            }
        })
    }

    /// Dual simplex: drive out bound violations while keeping reduced
    /// costs sign-feasible. Returns `Infeasible` when some violated row
    /// has no eligible entering column.
    fn dual_loop(&mut self) -> Result<LpStatus, LpError> {
        loop {
            if self.pivots_since_refactor >= self.config.refactor_interval {
                self.refactor();
            }
            self.iterations += 1;
            if self.iterations > self.config.max_iters {
                return Err(LpError::IterationLimit);
            }

            // leaving: largest bound violation, smallest row on ties
            let tol = self.config.feas_tol;
            let mut leave_r = usize::MAX;
            let mut worst = tol;
            for r in 0..self.nrows() {
                let b = self.basic[r] as usize;
                let viol = if self.x[b] < self.lower[b] - tol {
                    self.lower[b] - self.x[b]
                } else if self.x[b] > self.upper[b] + tol {
                    self.x[b] - self.upper[b]
                } else {
                    continue;
                };
                if viol > worst {
                    worst = viol;
                    leave_r = r;
                }
            }
            if leave_r == usize::MAX {
                return Ok(LpStatus::Optimal);
            }
            let r = leave_r;
            let bvar = self.basic[r] as usize;
            let below = self.x[bvar] < self.lower[bvar];
            let target = if below {
                self.lower[bvar]
            } else {
                self.upper[bvar]
            };

            let candidates = self.pivot_row_candidates(r);

            // dual ratio test (Harris two-pass); in stall mode the strict
            // smallest ratio with smallest-index ties
            let sgn = if below { -1.0 } else { 1.0 };
            let eligible = |this: &Self, j: usize, a: f64| -> Option<f64> {
                if this.lower[j] >= this.upper[j] {
                    return None;
                }
                let t = sgn * a;
                match this.vstat[j] {
                    VStat::AtLower if t > this.config.pivot_tol => Some(this.d[j].max(0.0) / t),
                    VStat::AtUpper if t < -this.config.pivot_tol => Some(this.d[j].min(0.0) / t),
                    _ => None,
                }
            };

            let bland = self.stall >= self.config.stall_threshold;
            let mut enter = usize::MAX;
            let mut enter_alpha = 0.0;
            if bland {
                let mut best_ratio = f64::INFINITY;
                for &(j, a) in &candidates {
                    if let Some(ratio) = eligible(self, j, a) {
                        if ratio < best_ratio - 1e-12 {
                            best_ratio = ratio;
                            enter = j;
                            enter_alpha = a;
                        }
                    }
                }
            } else {
                let mut max_step = f64::INFINITY;
                for &(j, a) in &candidates {
                    if eligible(self, j, a).is_some() {
                        let t = (sgn * a).abs();
                        let relaxed =
                            (clamp_dual(self.d[j], self.vstat[j]).abs() + self.config.dual_tol) / t;
                        if relaxed < max_step {
                            max_step = relaxed;
                        }
                    }
                }
                let mut best_pivot = 0.0;
                for &(j, a) in &candidates {
                    if let Some(ratio) = eligible(self, j, a) {
                        if ratio <= max_step && a.abs() > best_pivot {
                            best_pivot = a.abs();
                            enter = j;
                            enter_alpha = a;
                        }
                    }
                }
            }

            if enter == usize::MAX {
                return Ok(LpStatus::Infeasible);
            }

            self.pivot_dual(r, enter, enter_alpha, target, &candidates);
        }
    }

    /// BTRAN the unit row and gather alpha over nonbasic columns.
    fn pivot_row_candidates(&mut self, r: usize) -> Vec<(usize, f64)> {
        let nrows = self.nrows();
        let mut rho = std::mem::take(&mut self.work);
        rho.clear();
        rho.resize(nrows, 0.0);
        rho[r] = 1.0;
        Self::apply_etas_transposed(&self.etas, &mut rho);

        self.touched.clear();
        for (i, &rho_i) in rho.iter().enumerate() {
            if rho_i == 0.0 {
                continue;
            }
            for &(col, coef) in &self.rows[i] {
                let col = col as usize;
                if matches!(self.vstat[col], VStat::Basic(_)) {
                    continue;
                }
                if self.alpha[col] == 0.0 {
                    self.touched.push(col as u32);
                }
                self.alpha[col] += coef * rho_i;
            }
        }
        let mut candidates: Vec<(usize, f64)> = Vec::with_capacity(self.touched.len() + 8);
        for &col in &self.touched {
            let a = self.alpha[col as usize];
            if a.abs() > self.config.pivot_tol {
                candidates.push((col as usize, a));
            }
            self.alpha[col as usize] = 0.0;
        }
        for (i, &rho_i) in rho.iter().enumerate() {
            let slack = self.nstruct + i;
            if rho_i.abs() > self.config.pivot_tol
                && !matches!(self.vstat[slack], VStat::Basic(_))
            {
                candidates.push((slack, rho_i));
            }
        }
        candidates.sort_unstable_by_key(|&(j, _)| j);
        rho.iter_mut().for_each(|v| *v = 0.0);
        self.work = rho;
        candidates
    }

    /// Basis change for the dual iteration: entering `q` at row `r`.
    fn pivot_dual(
        &mut self,
        r: usize,
        q: usize,
        alpha_q: f64,
        target: f64,
        row_alpha: &[(usize, f64)],
    ) {
        let nrows = self.nrows();
        let mut w = std::mem::take(&mut self.work);
        w.clear();
        w.resize(nrows, 0.0);
        self.scatter_column(q, &mut w);
        Self::apply_etas(&self.etas, &mut w);
        let pivot = w[r];
        if pivot.abs() < self.config.pivot_tol / 10.0 {
            // the column disagrees with the row computation; refresh and retry
            w.iter_mut().for_each(|v| *v = 0.0);
            self.work = w;
            self.refactor();
            return;
        }

        let bvar = self.basic[r] as usize;
        let dq = (self.x[bvar] - target) / pivot;
        if dq != 0.0 {
            for (i, &wi) in w.iter().enumerate() {
                if wi != 0.0 {
                    let b = self.basic[i] as usize;
                    self.x[b] -= dq * wi;
                }
            }
        }
        self.x[q] += dq;
        self.x[bvar] = target;

        let theta = self.d[q] / alpha_q;
        for &(j, aj) in row_alpha {
            if j != q {
                self.d[j] -= theta * aj;
            }
        }
        self.d[bvar] = -theta;
        self.d[q] = 0.0;

        self.vstat[bvar] =
            if (target - self.lower[bvar]).abs() <= (target - self.upper[bvar]).abs() {
                VStat::AtLower
            } else {
                VStat::AtUpper
            };
        self.vstat[q] = VStat::Basic(r as u32);
        self.basic[r] = q as u32;

        if theta.abs() < 1e-12 && dq.abs() < 1e-12 {
            self.stall += 1;
        } else {
            self.stall = 0;
        }

        let off: Vec<(u32, f64)> = w
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i != r && v.abs() > 1e-12)
            .map(|(i, &v)| (i as u32, v))
            .collect();
        self.etas.push(Eta {
            r: r as u32,
            pivot,
            off,
        });
        self.pivots_since_refactor += 1;

        w.iter_mut().for_each(|v| *v = 0.0);
        self.work = w;
    }

    /// Primal simplex cleanup: pursue favourable reduced costs while
    /// keeping basic variables inside their bounds.
    fn primal_loop(&mut self) -> Result<(), LpError> {
        loop {
            if self.pivots_since_refactor >= self.config.refactor_interval {
                self.refactor();
            }
            self.iterations += 1;
            if self.iterations > self.config.max_iters {
                return Err(LpError::IterationLimit);
            }

            let bland = self.stall >= self.config.stall_threshold;
            let mut q = usize::MAX;
            let mut best = self.config.dual_tol;
            for j in 0..self.ntotal() {
                if self.lower[j] >= self.upper[j] {
                    continue;
                }
                let score = match self.vstat[j] {
                    VStat::AtLower => -self.d[j],
                    VStat::AtUpper => self.d[j],
                    VStat::Basic(_) => continue,
                };
                if score > best {
                    best = score;
                    q = j;
                    if bland {
                        break;
                    }
                }
            }
            if q == usize::MAX {
                return Ok(());
            }

            let sigma = match self.vstat[q] {
                VStat::AtLower => 1.0,
                _ => -1.0,
            };
            let nrows = self.nrows();
            let mut w = std::mem::take(&mut self.work);
            w.clear();
            w.resize(nrows, 0.0);
            self.scatter_column(q, &mut w);
            Self::apply_etas(&self.etas, &mut w);

            let own_range = self.upper[q] - self.lower[q];
            let mut theta_max = own_range;
            for (i, &wi) in w.iter().enumerate() {
                let rate = -sigma * wi;
                if rate.abs() < self.config.pivot_tol {
                    continue;
                }
                let b = self.basic[i] as usize;
                let room = if rate > 0.0 {
                    (self.upper[b] - self.x[b]).max(0.0)
                } else {
                    (self.x[b] - self.lower[b]).max(0.0)
                };
                let relaxed = (room + self.config.feas_tol) / rate.abs();
                if relaxed < theta_max {
                    theta_max = relaxed;
                }
            }
            let mut blocker = usize::MAX;
            let mut blocker_pivot = 0.0f64;
            let mut theta = f64::INFINITY;
            for (i, &wi) in w.iter().enumerate() {
                let rate = -sigma * wi;
                if rate.abs() < self.config.pivot_tol {
                    continue;
                }
                let b = self.basic[i] as usize;
                let room = if rate > 0.0 {
                    (self.upper[b] - self.x[b]).max(0.0)
                } else {
                    (self.x[b] - self.lower[b]).max(0.0)
                };
                let t = room / rate.abs();
                if t <= theta_max
                    && (blocker == usize::MAX
                        || (bland && t < theta - 1e-12)
                        || (!bland && wi.abs() > blocker_pivot.abs()))
                {
                    theta = t;
                    blocker = i;
                    blocker_pivot = wi;
                }
            }

            if blocker == usize::MAX && !own_range.is_finite() {
                return Err(LpError::Unbounded);
            }

            if blocker == usize::MAX || own_range <= theta {
                // bound flip
                let step = sigma * own_range;
                for (i, &wi) in w.iter().enumerate() {
                    if wi != 0.0 {
                        let b = self.basic[i] as usize;
                        self.x[b] -= step * wi;
                    }
                }
                self.vstat[q] = match self.vstat[q] {
                    VStat::AtLower => VStat::AtUpper,
                    _ => VStat::AtLower,
                };
                self.x[q] = match self.vstat[q] {
                    VStat::AtUpper => self.upper[q],
                    _ => self.lower[q],
                };
                if own_range.abs() < 1e-12 {
                    self.stall += 1;
                } else {
                    self.stall = 0;
                }
                w.iter_mut().for_each(|v| *v = 0.0);
                self.work = w;
                continue;
            }

            // pivot at the blocking row
            let r = blocker;
            let bvar = self.basic[r] as usize;
            let rate = -sigma * blocker_pivot;
            let leave_to_upper = rate > 0.0;
            let step = sigma * theta;
            for (i, &wi) in w.iter().enumerate() {
                if wi != 0.0 {
                    let b = self.basic[i] as usize;
                    self.x[b] -= step * wi;
                }
            }
            self.x[q] += step;
            self.x[bvar] = if leave_to_upper {
                self.upper[bvar]
            } else {
                self.lower[bvar]
            };
            let pivot = w[r];
            let off: Vec<(u32, f64)> = w
                .iter()
                .enumerate()
                .filter(|&(i, &v)| i != r && v.abs() > 1e-12)
                .map(|(i, &v)| (i as u32, v))
                .collect();
            w.iter_mut().for_each(|v| *v = 0.0);
            self.work = w;

            // dual update via the pivot row
            let row_alpha = self.pivot_row_candidates(r);
            let alpha_q = row_alpha
                .iter()
                .find(|&&(j, _)| j == q)
                .map(|&(_, a)| a)
                .unwrap_or(pivot);
            let theta_d = self.d[q] / alpha_q;
            for &(j, aj) in &row_alpha {
                if j != q {
                    self.d[j] -= theta_d * aj;
                }
            }
            self.d[bvar] = -theta_d;
            self.d[q] = 0.0;

            self.vstat[bvar] = if leave_to_upper {
                VStat::AtUpper
            } else {
                VStat::AtLower
            };
            self.vstat[q] = VStat::Basic(r as u32);
            self.basic[r] = q as u32;
            if theta.abs() < 1e-12 {
                self.stall += 1;
            } else {
                self.stall = 0;
            }
            self.etas.push(Eta {
                r: r as u32,
                pivot,
                off,
            });
            self.pivots_since_refactor += 1;
        }
    }
}

fn finite_or(a: f64, b: f64) -> f64 {
    if a.is_finite() {
        a
    } else {
        b
    }
}

fn clamp_dual(d: f64, stat: VStat) -> f64 {
    match stat {
        VStat::AtLower => d.max(0.0),
        VStat::AtUpper => d.min(0.0),
        VStat::Basic(_) => 0.0,
    }
}

/// Solve the relaxation of `model` (integrality ignored) with optional
/// bound overrides `(var, lower, upper)`.
pub fn solve_lp(model: &IlpModel, overrides: &[(usize, f64, f64)]) -> Result<LpSolution, LpError> {
    let mut s = Simplex::new(model, LpConfig::default());
    for &(v, lo, up) in overrides {
        s.set_bounds(v, lo, up);
    }
    let status = s.solve()?;
    Ok(LpSolution {
        status,
        objective: s.objective_value(),
        values: s.structural_values().to_vec(),
        iterations: s.iterations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SignedGraph;
    use crate::model::{
        add_fix_colour, add_triangle_cuts, build_abs, build_and, build_multicolour, build_weighted,
        build_xor, CutMode,
    };
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

    /// Feasibility of the returned point, checked directly on the model.
    fn assert_feasible(model: &crate::model::IlpModel, sol: &LpSolution) {
        for (j, v) in model.vars.iter().enumerate() {
            assert!(
                sol.values[j] >= v.lower - 1e-6 && sol.values[j] <= v.upper + 1e-6,
                "variable {} out of bounds: {}",
                v.name,
                sol.values[j]
            );
        }
        for c in &model.constraints {
            assert!(c.satisfied(&sol.values, 1e-6));
        }
    }

    #[test]
    fn plain_relaxations_have_value_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..25 {
            let n = rng.gen_range(3..=12);
            let p = rng.gen_range(0.2..0.9);
            let g = random_graph(&mut rng, n, p, 0.5);
            for m in [build_and(&g).unwrap(), build_xor(&g).unwrap(), build_abs(&g).unwrap()] {
                let sol = solve_lp(&m, &[]).unwrap();
                assert_eq!(sol.status, LpStatus::Optimal);
                assert!(sol.objective.abs() < 1e-6, "root must be 0, got {}", sol.objective);
                assert_feasible(&m, &sol);
            }
        }
    }

    #[test]
    fn single_edge_with_fixing() {
        // positive edge: the other endpoint follows, objective stays 0
        let g = SignedGraph::new(2, &[(0, 1, 1)]).unwrap();
        let mut m = build_xor(&g).unwrap();
        add_fix_colour(&mut m, &g).unwrap();
        let sol = solve_lp(&m, &[]).unwrap();
        assert!(sol.objective.abs() < 1e-9);
        assert!((sol.values[1] - 1.0).abs() < 1e-9);

        // negative edge: the other endpoint flips
        let g = SignedGraph::new(2, &[(0, 1, -1)]).unwrap();
        let mut m = build_xor(&g).unwrap();
        add_fix_colour(&mut m, &g).unwrap();
        let sol = solve_lp(&m, &[]).unwrap();
        assert!(sol.objective.abs() < 1e-9);
        assert!(sol.values[1].abs() < 1e-9);
    }

    #[test]
    fn fixing_bounds_the_root_by_half_the_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(78);
        for _ in 0..20 {
            let n = rng.gen_range(5..=14);
            let g = random_graph(&mut rng, n, 0.5, 0.5);
            let k = g.max_degree_node().unwrap();
            for build in [build_and, build_xor, build_abs] {
                let mut m = build(&g).unwrap();
                add_fix_colour(&mut m, &g).unwrap();
                let sol = solve_lp(&m, &[]).unwrap();
                assert!(sol.objective <= g.degree(k) as f64 / 2.0 + 1e-6);
                assert!(sol.objective >= -1e-9);
                assert_feasible(&m, &sol);
            }
        }
    }

    #[test]
    fn cuts_never_lower_the_root() {
        let mut rng = ChaCha8Rng::seed_from_u64(79);
        for _ in 0..15 {
            let n = rng.gen_range(5..=12);
            let g = random_graph(&mut rng, n, 0.6, 0.5);
            for build in [build_and, build_xor, build_abs] {
                let mut m = build(&g).unwrap();
                add_fix_colour(&mut m, &g).unwrap();
                let plain = solve_lp(&m, &[]).unwrap().objective;
                add_triangle_cuts(&mut m, &g, CutMode::Upfront).unwrap();
                let cut = solve_lp(&m, &[]).unwrap().objective;
                assert!(cut >= plain - 1e-6, "cut root {cut} < fix root {plain}");
            }
        }
    }

    #[test]
    fn triangle_cut_lifts_single_triangle_root() {
        let g = SignedGraph::new(3, &[(0, 1, -1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let mut m = build_xor(&g).unwrap();
        add_fix_colour(&mut m, &g).unwrap();
        let plain = solve_lp(&m, &[]).unwrap().objective;
        add_triangle_cuts(&mut m, &g, CutMode::Upfront).unwrap();
        let with_cut = solve_lp(&m, &[]).unwrap().objective;
        assert!(with_cut >= 1.0 - 1e-6, "one cut forces a whole unit");
        assert!(with_cut >= plain);
    }

    #[test]
    fn branching_bounds_can_make_models_infeasible() {
        // one ABS row with all four variables fixed inconsistently
        let g = SignedGraph::new(2, &[(0, 1, 1)]).unwrap();
        let m = build_abs(&g).unwrap();
        let sol = solve_lp(
            &m,
            &[(0, 1.0, 1.0), (1, 0.0, 0.0), (2, 0.0, 0.0), (3, 0.0, 0.0)],
        )
        .unwrap();
        assert_eq!(sol.status, LpStatus::Infeasible);
    }

    #[test]
    fn weighted_and_multicolour_relaxations_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(80);
        for _ in 0..10 {
            let n = rng.gen_range(4..=10);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in (u + 1)..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v, rng.gen_range(-1.0..=1.0)));
                    }
                }
            }
            let g = SignedGraph::weighted(n, &edges).unwrap();
            let m = build_weighted(&g).unwrap();
            let sol = solve_lp(&m, &[]).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
            assert_feasible(&m, &sol);

            let gu = random_graph(&mut rng, n, 0.5, 0.5);
            let m = build_multicolour(&gu, 3).unwrap();
            let sol = solve_lp(&m, &[]).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
            assert_feasible(&m, &sol);
            assert!(sol.objective >= -1e-9);
        }
    }

    #[test]
    fn determinism() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let g = random_graph(&mut rng, 12, 0.6, 0.4);
        let mut m = build_xor(&g).unwrap();
        add_fix_colour(&mut m, &g).unwrap();
        add_triangle_cuts(&mut m, &g, CutMode::Upfront).unwrap();
        let a = solve_lp(&m, &[]).unwrap();
        let b = solve_lp(&m, &[]).unwrap();
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.iterations, b.iterations);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn warm_restart_after_bound_change_matches_cold() {
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        for _ in 0..10 {
            let n = rng.gen_range(5..=12);
            let g = random_graph(&mut rng, n, 0.6, 0.5);
            let mut m = build_and(&g).unwrap();
            add_fix_colour(&mut m, &g).unwrap();
            let mut warm = Simplex::new(&m, LpConfig::default());
            warm.solve().unwrap();
            // fix node 1 to zero and re-solve warm vs cold
            warm.set_bounds(1, 0.0, 0.0);
            let ws = warm.solve().unwrap();
            let cold = solve_lp(&m, &[(1, 0.0, 0.0)]).unwrap();
            assert_eq!(ws, cold.status);
            if ws == LpStatus::Optimal {
                assert!((warm.objective_value() - cold.objective).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn weak_duality_against_feasible_colourings() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        for _ in 0..10 {
            let n = rng.gen_range(4..=10);
            let g = random_graph(&mut rng, n, 0.6, 0.5);
            let m = build_xor(&g).unwrap();
            let lp = solve_lp(&m, &[]).unwrap().objective;
            for mask in 0..(1u32 << n.min(6)) {
                let colours: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
                let x = crate::graph::Colouring::new(colours);
                let v = crate::model::model_value(&m, &g, &x);
                assert!(lp <= v + 1e-6);
            }
        }
    }

    #[test]
    fn empty_and_edgeless_models() {
        let g = SignedGraph::new(0, &[]).unwrap();
        let m = build_xor(&g).unwrap();
        let sol = solve_lp(&m, &[]).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, 0.0);

        let g = SignedGraph::new(3, &[]).unwrap();
        let m = build_and(&g).unwrap();
        let sol = solve_lp(&m, &[]).unwrap();
        assert!(sol.objective.abs() < 1e-12);
    }

    #[test]
    fn k9_lp_with_cuts_stays_below_integer_optimum() {
        let g = samples::complete_negative(9);
        let mut m = build_xor(&g).unwrap();
        add_fix_colour(&mut m, &g).unwrap();
        add_triangle_cuts(&mut m, &g, CutMode::Upfront).unwrap();
        let sol = solve_lp(&m, &[]).unwrap();
        // a valid lower bound on the known optimum 16
        assert!(sol.objective <= 16.0 + 1e-6);
        assert!(sol.objective > 0.0);
    }
}
