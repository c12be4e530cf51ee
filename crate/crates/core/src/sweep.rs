//! Benchmark sweeps over generator grids.
//!
//! A sweep fixes a topology (n and edge budget), varies the negative-edge
//! fraction, draws `repetitions` seeded instances per cell, and solves
//! each instance with every requested model. The same seeds are reused
//! across fractions and models, so every model column sees the same
//! underlying graphs. Cells run in a worker pool; the instances inside a
//! cell run serially so per-instance timings stay comparable.

use rayon::prelude::*;

use crate::bnb::{solve_graph, ModelChoice, SolveOptions, SolveStatus};
use crate::generate::{generate, EdgeBudget, GenModel, GenSpec};
use crate::io::ReportRow;

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub gen_model: GenModel,
    pub n: usize,
    pub edges: EdgeBudget,
    pub neg_fractions: Vec<f64>,
    pub repetitions: usize,
    pub base_seed: u64,
}

/// Aggregate of one (fraction, model) cell.
#[derive(Clone, Debug)]
pub struct CellStats {
    pub n: usize,
    pub edges: EdgeBudget,
    pub neg_fraction: f64,
    pub model: String,
    pub instances: usize,
    /// Solves stopped by the time limit; their incumbents still count
    /// into the optimum mean, flagged here.
    pub timeouts: usize,
    pub mean_optimum: f64,
    pub mean_time_s: f64,
    pub sd_time_s: f64,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, Default)]
pub struct SweepReport {
    pub cells: Vec<CellStats>,
    /// One row per individual solve, in deterministic order.
    pub rows: Vec<ReportRow>,
}

#[derive(Debug)]
pub enum SweepError {
    Gen(crate::generate::GenError),
    Solve(String),
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Gen(e) => write!(f, "generation failed: {e}"),
            SweepError::Solve(e) => write!(f, "solve failed: {e}"),
        }
    }
}

impl std::error::Error for SweepError {}

fn edges_label(e: &EdgeBudget) -> String {
    match e {
        EdgeBudget::Density(rho) => format!("rho{rho}"),
        EdgeBudget::Exact(m) => format!("m{m}"),
    }
}

/// Run the grid; cells are (fraction × model), instances inside a cell
/// share seeds `base_seed..base_seed+repetitions`.
pub fn run_sweep(
    spec: &SweepSpec,
    models: &[ModelChoice],
    options: &SolveOptions,
) -> Result<SweepReport, SweepError> {
    let cells: Vec<(f64, ModelChoice)> = spec
        .neg_fractions
        .iter()
        .flat_map(|&f| models.iter().map(move |&m| (f, m)))
        .collect();

    let results: Vec<Result<(CellStats, Vec<ReportRow>), SweepError>> = cells
        .par_iter()
        .map(|&(fraction, model)| run_cell(spec, fraction, model, options))
        .collect();

    let mut report = SweepReport::default();
    for r in results {
        let (cell, mut rows) = r?;
        report.cells.push(cell);
        report.rows.append(&mut rows);
    }
    Ok(report)
}

fn run_cell(
    spec: &SweepSpec,
    fraction: f64,
    model: ModelChoice,
    options: &SolveOptions,
) -> Result<(CellStats, Vec<ReportRow>), SweepError> {
    let mut rows = Vec::new();
    let mut times = Vec::new();
    let mut optima = Vec::new();
    let mut timeouts = 0usize;
    let mut seeds = Vec::new();
    for rep in 0..spec.repetitions {
        let seed = spec.base_seed + rep as u64;
        seeds.push(seed);
        let gspec = GenSpec {
            model: spec.gen_model,
            n: spec.n,
            edges: spec.edges,
            neg_fraction: fraction,
            seed,
            weighted: false,
        };
        let g = generate(&gspec).map_err(SweepError::Gen)?;
        let r = solve_graph(&g, model, options).map_err(|e| SweepError::Solve(e.to_string()))?;
        if r.status == SolveStatus::Bounded {
            timeouts += 1;
        }
        let name = format!(
            "{}-n{}-{}-f{}-s{}",
            match spec.gen_model {
                GenModel::ErdosRenyi => "er",
                GenModel::BarabasiAlbert => "ba",
            },
            spec.n,
            edges_label(&spec.edges),
            fraction,
            seed
        );
        times.push(r.wall_time.as_secs_f64());
        optima.push(r.optimum);
        rows.push(ReportRow {
            instance: name,
            model: r.model.clone(),
            n: g.node_count(),
            m: g.edge_count(),
            m_neg: g.negative_count(),
            optimum: r.optimum,
            root_objective: r.root_objective,
            nodes: r.nodes,
            branching_factor: r.branching_factor,
            time_s: r.wall_time.as_secs_f64(),
        });
    }
    let mean = |xs: &[f64]| {
        if xs.is_empty() {
            0.0
        } else {
            xs.iter().sum::<f64>() / xs.len() as f64
        }
    };
    let mean_time = mean(&times);
    let sd_time = if times.len() > 1 {
        (times
            .iter()
            .map(|t| (t - mean_time) * (t - mean_time))
            .sum::<f64>()
            / (times.len() - 1) as f64)
            .sqrt()
    } else {
        0.0
    };
    Ok((
        CellStats {
            n: spec.n,
            edges: spec.edges,
            neg_fraction: fraction,
            model: model.name(),
            instances: spec.repetitions,
            timeouts,
            mean_optimum: mean(&optima),
            mean_time_s: mean_time,
            sd_time_s: sd_time,
            seeds,
        },
        rows,
    ))
}

pub const SWEEP_HEADER: &str =
    "n,edges,neg_fraction,model,instances,timeouts,mean_optimum,mean_time_s,sd_time_s,seeds";

/// Aggregate CSV, one line per cell, seeds recorded for replay.
pub fn sweep_csv(cells: &[CellStats]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for c in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{:.4},{:.4},{:.4},{}\n",
            c.n,
            edges_label(&c.edges),
            c.neg_fraction,
            c.model,
            c.instances,
            c.timeouts,
            c.mean_optimum,
            c.mean_time_s,
            c.sd_time_s,
            c.seeds
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(";")
        ));
    }
    out
}
