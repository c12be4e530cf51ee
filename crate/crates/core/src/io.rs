//! Edge-list file I/O and the solve-report CSV schema.
//!
//! The canonical edge-list format is one edge per line, `u v s`, where the
//! separator is any run of whitespace or a comma, `u`/`v` are arbitrary
//! labels, and `s` is `+1`, `-1`, `+`, `-` (or `1`), or, in weighted mode,
//! a real number in [-1, 1] with `.` as the decimal separator. Lines whose
//! first non-blank character is `#` are comments. Labels are mapped to
//! dense ids in order of first appearance.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::generate::GenSpec;
use crate::graph::SignedGraph;

/// A named dataset: the graph plus the label map and provenance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub graph: SignedGraph,
    /// Dense id -> external label; a bijection over the n nodes.
    pub labels: Vec<String>,
    pub source: Source,
}

#[derive(Clone, Debug)]
pub enum Source {
    File(PathBuf),
    Generated(GenSpec),
    InMemory,
}

impl Instance {
    /// Wrap a graph with stringified node ids as labels.
    pub fn from_graph(name: impl Into<String>, graph: SignedGraph) -> Self {
        let labels = (0..graph.node_count()).map(|i| i.to_string()).collect();
        Instance {
            name: name.into(),
            graph,
            labels,
            source: Source::InMemory,
        }
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }
}

#[derive(Debug)]
pub enum IoError {
    Io(std::io::Error),
    Malformed { line: usize, message: String },
    SelfLoop { line: usize, label: String },
    DuplicateEdge { line: usize, a: String, b: String },
    WeightOutOfRange { line: usize, weight: f64 },
}

impl fmt::Display for IoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IoError::Io(e) => write!(f, "i/o failure: {e}"),
            IoError::Malformed { line, message } => write!(f, "line {line}: {message}"),
            IoError::SelfLoop { line, label } => {
                write!(f, "line {line}: self-loop at node '{label}'")
            }
            IoError::DuplicateEdge { line, a, b } => {
                write!(f, "line {line}: duplicate edge ('{a}', '{b}')")
            }
            IoError::WeightOutOfRange { line, weight } => {
                write!(f, "line {line}: weight {weight} outside [-1, 1]")
            }
        }
    }
}

impl std::error::Error for IoError {}

impl From<std::io::Error> for IoError {
    fn from(e: std::io::Error) -> Self {
        IoError::Io(e)
    }
}

/// Parsing options.
#[derive(Clone, Copy, Debug, Default)]
pub struct ReadOptions {
    /// Accept arbitrary weights in [-1, 1] instead of ±1 signs.
    pub weighted: bool,
}

/// Parse an edge-list file into an [`Instance`].
pub fn read_edge_list(path: impl AsRef<Path>, options: ReadOptions) -> Result<Instance, IoError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".to_string());
    let mut inst = parse_edge_list(&text, &name, options)?;
    inst.source = Source::File(path.to_path_buf());
    Ok(inst)
}

/// Parse edge-list text; `read_edge_list` is the file-backed wrapper.
pub fn parse_edge_list(
    text: &str,
    name: &str,
    options: ReadOptions,
) -> Result<Instance, IoError> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: std::collections::HashMap<String, usize> = Default::default();
    let mut signed_edges: Vec<(usize, usize, i8)> = Vec::new();
    let mut weighted_edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen: std::collections::HashSet<(usize, usize)> = Default::default();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 3 {
            return Err(IoError::Malformed {
                line: lineno,
                message: format!("expected 'u v s', found {} fields", fields.len()),
            });
        }
        let mut id_of = |label: &str| -> usize {
            if let Some(&id) = ids.get(label) {
                return id;
            }
            let id = labels.len();
            labels.push(label.to_string());
            ids.insert(label.to_string(), id);
            id
        };
        let u = id_of(fields[0]);
        let v = id_of(fields[1]);
        if u == v {
            return Err(IoError::SelfLoop {
                line: lineno,
                label: fields[0].to_string(),
            });
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(IoError::DuplicateEdge {
                line: lineno,
                a: fields[0].to_string(),
                b: fields[1].to_string(),
            });
        }
        if options.weighted {
            let w: f64 = parse_weight(fields[2], lineno)?;
            if !(-1.0..=1.0).contains(&w) {
                return Err(IoError::WeightOutOfRange {
                    line: lineno,
                    weight: w,
                });
            }
            weighted_edges.push((u, v, w));
        } else {
            let s = match fields[2] {
                "+1" | "+" | "1" => 1i8,
                "-1" | "-" => -1i8,
                other => {
                    return Err(IoError::Malformed {
                        line: lineno,
                        message: format!("sign '{other}' is not one of +1, -1, +, -"),
                    })
                }
            };
            signed_edges.push((u, v, s));
        }
    }

    let n = labels.len();
    let graph = if options.weighted {
        SignedGraph::weighted(n, &weighted_edges)
    } else {
        SignedGraph::new(n, &signed_edges)
    }
    .map_err(|e| IoError::Malformed {
        line: 0,
        message: e.to_string(),
    })?;

    Ok(Instance {
        name: name.to_string(),
        graph,
        labels,
        source: Source::InMemory,
    })
}

fn parse_weight(token: &str, line: usize) -> Result<f64, IoError> {
    let cleaned = token.strip_prefix('+').unwrap_or(token);
    cleaned.parse::<f64>().map_err(|_| IoError::Malformed {
        line,
        message: format!("weight '{token}' is not a number"),
    })
}

/// Write an instance back as an edge list. Weighted graphs keep nine
/// decimal digits per weight.
pub fn write_edge_list(inst: &Instance, path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut out = String::new();
    out.push_str(&format!(
        "# {} : n={} m={}\n",
        inst.name,
        inst.graph.node_count(),
        inst.graph.edge_count()
    ));
    for (idx, e) in inst.graph.edges().iter().enumerate() {
        if inst.graph.is_weighted() {
            out.push_str(&format!(
                "{} {} {:.9}\n",
                inst.label(e.u),
                inst.label(e.v),
                inst.graph.edge_weight(idx)
            ));
        } else {
            out.push_str(&format!(
                "{} {} {:+}\n",
                inst.label(e.u),
                inst.label(e.v),
                e.sign
            ));
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// One solve per row; the schema mirrors the performance tables:
/// instance, model, n, m, m-, optimum, root objective, branch-and-bound
/// node count, effective branching factor, wall time in seconds.
#[derive(Clone, Debug)]
pub struct ReportRow {
    pub instance: String,
    pub model: String,
    pub n: usize,
    pub m: usize,
    pub m_neg: usize,
    pub optimum: f64,
    pub root_objective: f64,
    pub nodes: u64,
    pub branching_factor: f64,
    pub time_s: f64,
}

pub const REPORT_HEADER: &str =
    "instance,model,n,m,m_neg,optimum,root_objective,nodes,branching_factor,time_s";

/// Format a float without a trailing `.0` when it is integral.
pub fn fmt_number(v: f64) -> String {
    if v.is_finite() && (v - v.round()).abs() < 1e-9 && v.abs() < 1e15 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v}")
    }
}

pub fn report_csv_line(row: &ReportRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{:.4},{:.3}",
        row.instance,
        row.model,
        row.n,
        row.m,
        row.m_neg,
        fmt_number(row.optimum),
        fmt_number(row.root_objective),
        row.nodes,
        row.branching_factor,
        row.time_s
    )
}

/// Write solve reports as CSV, header first; an empty run yields a
/// header-only file.
pub fn write_report_csv(rows: &[ReportRow], path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&report_csv_line(row));
        out.push('\n');
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}
