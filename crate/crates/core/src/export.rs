//! LP-format text export and a reader for the written subset.
//!
//! The writer emits a deterministic CPLEX-style LP file: `Minimize`,
//! `Subject To`, `Bounds`, `Binary`, `End`, with variables named as built
//! (`x_3`, `x_0_1`, `f_0_1`, `e_0_1`/`h_0_1`, `x_2_c1`). The format cannot
//! carry an objective constant, so the constant is noted in a leading
//! comment and must be added to an external solver's objective to obtain
//! the reported optimum. Branching priorities go to a `<file>.prio`
//! sidecar with one `name priority` line per prioritised variable.
//!
//! The reader accepts exactly this subset so exported models can be read
//! back and solved natively.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::model::{CmpSense, ColourMap, Constraint, IlpModel, LinExpr, ModelKind, Variable};

#[derive(Debug)]
pub enum ExportError {
    Io(std::io::Error),
    Parse { line: usize, message: String },
}

impl fmt::Display for ExportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExportError::Io(e) => write!(f, "i/o failure: {e}"),
            ExportError::Parse { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl std::error::Error for ExportError {}

impl From<std::io::Error> for ExportError {
    fn from(e: std::io::Error) -> Self {
        ExportError::Io(e)
    }
}

fn fmt_coef(v: f64) -> String {
    if (v - v.round()).abs() < 1e-12 && v.abs() < 1e15 {
        format!("{}", v.round() as i64)
    } else {
        format!("{v}")
    }
}

fn push_expr(out: &mut String, terms: &[(usize, f64)], vars: &[Variable]) {
    let mut first = true;
    for &(v, c) in terms {
        if c == 0.0 {
            continue;
        }
        let mag = c.abs();
        if first {
            if c < 0.0 {
                out.push_str("- ");
            }
            first = false;
        } else if c < 0.0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if (mag - 1.0).abs() > 1e-15 {
            out.push_str(&fmt_coef(mag));
            out.push(' ');
        }
        out.push_str(&vars[v].name);
    }
    if first {
        out.push('0');
    }
}

/// Serialise the model; byte-identical output for identical models.
pub fn write_lp_string(model: &IlpModel) -> String {
    let mut out = String::new();
    out.push_str(&format!("\\ {} model\n", model.kind.name()));
    out.push_str(&format!(
        "\\ objective constant: {} (add to the solver objective to obtain the reported optimum)\n",
        fmt_coef(model.objective.constant)
    ));
    out.push_str("Minimize\n obj: ");
    push_expr(&mut out, &model.objective.terms, &model.vars);
    out.push_str("\nSubject To\n");
    for (i, c) in model.constraints.iter().enumerate() {
        out.push_str(&format!(" c{i}: "));
        push_expr(&mut out, &c.terms, &model.vars);
        let sense = match c.sense {
            CmpSense::Le => "<=",
            CmpSense::Ge => ">=",
            CmpSense::Eq => "=",
        };
        out.push_str(&format!(" {sense} {}\n", fmt_coef(c.rhs)));
    }
    out.push_str("Bounds\n");
    for v in &model.vars {
        if v.lower == v.upper {
            out.push_str(&format!(" {} = {}\n", v.name, fmt_coef(v.lower)));
        } else if !v.integral || v.lower != 0.0 || v.upper != 1.0 {
            out.push_str(&format!(
                " {} <= {} <= {}\n",
                fmt_coef(v.lower),
                v.name,
                fmt_coef(v.upper)
            ));
        }
    }
    let binaries: Vec<&str> = model
        .vars
        .iter()
        .filter(|v| v.integral)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binary\n");
        for chunk in binaries.chunks(10) {
            out.push(' ');
            out.push_str(&chunk.join(" "));
            out.push('\n');
        }
    }
    out.push_str("End\n");
    out
}

/// Sidecar text: `name priority` per prioritised variable.
pub fn priorities_string(model: &IlpModel) -> String {
    let mut out = String::new();
    for v in &model.vars {
        if v.priority > 0 {
            out.push_str(&format!("{} {}\n", v.name, v.priority));
        }
    }
    out
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut sidecar = PathBuf::from(path);
    let ext = sidecar
        .extension()
        .map(|e| format!("{}.prio", e.to_string_lossy()))
        .unwrap_or_else(|| "prio".to_string());
    sidecar.set_extension(ext);
    sidecar
}

/// Write `<path>` and the `<path>.prio` sidecar.
pub fn export_lp(model: &IlpModel, path: impl AsRef<Path>) -> Result<(), ExportError> {
    let path = path.as_ref();
    let mut f = fs::File::create(path)?;
    f.write_all(write_lp_string(model).as_bytes())?;
    let mut f = fs::File::create(sidecar_path(path))?;
    f.write_all(priorities_string(model).as_bytes())?;
    Ok(())
}

/// Parse a file produced by [`export_lp`] (or an equivalent subset),
/// picking up the `.prio` sidecar when present.
pub fn parse_lp(path: impl AsRef<Path>) -> Result<IlpModel, ExportError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut model = parse_lp_string(&text)?;
    let sidecar = sidecar_path(path);
    if sidecar.exists() {
        let prio_text = fs::read_to_string(sidecar)?;
        let by_name: std::collections::HashMap<String, usize> = model
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.clone(), i))
            .collect();
        for (lineno, line) in prio_text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let (name, prio) = (it.next(), it.next());
            match (name, prio.and_then(|p| p.parse::<u64>().ok())) {
                (Some(name), Some(p)) => {
                    if let Some(&idx) = by_name.get(name) {
                        model.vars[idx].priority = p;
                    }
                }
                _ => {
                    return Err(ExportError::Parse {
                        line: lineno + 1,
                        message: "expected 'name priority'".to_string(),
                    })
                }
            }
        }
    }
    Ok(model)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binary,
    General,
    Done,
}

/// Parse LP text (the written subset).
pub fn parse_lp_string(text: &str) -> Result<IlpModel, ExportError> {
    let mut vars: Vec<Variable> = Vec::new();
    let mut index: std::collections::HashMap<String, usize> = Default::default();
    let mut objective = LinExpr::new();
    let mut constraints: Vec<Constraint> = Vec::new();
    let mut section = Section::Preamble;
    // a constraint may wrap across lines until its sense token appears
    let mut pending_terms: Vec<(usize, f64)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let mut line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('\\') {
            if let Some(rest) = comment.trim().strip_prefix("objective constant:") {
                let tok = rest.trim().split_whitespace().next().unwrap_or("");
                objective.constant = tok.parse::<f64>().map_err(|_| ExportError::Parse {
                    line: lineno,
                    message: format!("bad objective constant '{tok}'"),
                })?;
            }
            continue;
        }
        let lowered = line.to_ascii_lowercase();
        match lowered.as_str() {
            "minimize" | "min" => {
                section = Section::Objective;
                continue;
            }
            "maximize" | "max" => {
                return Err(ExportError::Parse {
                    line: lineno,
                    message: "only minimisation models are supported".to_string(),
                })
            }
            "subject to" | "st" | "s.t." | "such that" => {
                section = Section::Constraints;
                continue;
            }
            "bounds" => {
                section = Section::Bounds;
                continue;
            }
            "binary" | "binaries" | "bin" => {
                section = Section::Binary;
                continue;
            }
            "general" | "generals" | "gen" => {
                section = Section::General;
                continue;
            }
            "end" => {
                section = Section::Done;
                continue;
            }
            _ => {}
        }

        match section {
            Section::Preamble | Section::Done => {
                return Err(ExportError::Parse {
                    line: lineno,
                    message: format!("unexpected content '{line}'"),
                })
            }
            Section::Objective => {
                if let Some(pos) = line.find(':') {
                    line = line[pos + 1..].trim_start();
                }
                for (v, c) in parse_terms(line, lineno, &mut vars, &mut index)? {
                    objective.add(v, c);
                }
            }
            Section::Constraints => {
                if let Some(pos) = line.find(':') {
                    line = line[pos + 1..].trim_start();
                }
                let sense_pos = ["<=", ">=", "="]
                    .iter()
                    .filter_map(|s| line.find(s).map(|p| (p, *s)))
                    .min_by_key(|&(p, _)| p);
                match sense_pos {
                    None => {
                        pending_terms.extend(parse_terms(line, lineno, &mut vars, &mut index)?);
                    }
                    Some((p, stok)) => {
                        let lhs = &line[..p];
                        let rhs = line[p + stok.len()..].trim();
                        let mut terms = parse_terms(lhs, lineno, &mut vars, &mut index)?;
                        let mut all = std::mem::take(&mut pending_terms);
                        all.append(&mut terms);
                        let rhs: f64 = rhs.parse().map_err(|_| ExportError::Parse {
                            line: lineno,
                            message: format!("bad right-hand side '{rhs}'"),
                        })?;
                        let sense = match stok {
                            "<=" => CmpSense::Le,
                            ">=" => CmpSense::Ge,
                            _ => CmpSense::Eq,
                        };
                        constraints.push(Constraint {
                            terms: all,
                            sense,
                            rhs,
                        });
                    }
                }
            }
            Section::Bounds => {
                parse_bound_line(line, lineno, &mut vars, &mut index)?;
            }
            Section::Binary | Section::General => {
                let binary = section == Section::Binary;
                for name in line.split_whitespace() {
                    let i = intern(name, &mut vars, &mut index);
                    vars[i].integral = true;
                    if binary {
                        vars[i].lower = vars[i].lower.max(0.0);
                        if !vars[i].upper.is_finite() || vars[i].upper > 1.0 {
                            vars[i].upper = 1.0;
                        }
                    }
                }
            }
        }
    }

    let colour_map = recover_colour_map(&vars, &index);
    Ok(IlpModel {
        kind: ModelKind::Imported,
        vars,
        constraints,
        objective: objective.normalised(),
        cut_pool: Vec::new(),
        colour_map,
        frustration: Vec::new(),
    })
}

fn intern(
    name: &str,
    vars: &mut Vec<Variable>,
    index: &mut std::collections::HashMap<String, usize>,
) -> usize {
    if let Some(&i) = index.get(name) {
        return i;
    }
    let i = vars.len();
    vars.push(Variable {
        name: name.to_string(),
        lower: 0.0,
        upper: f64::INFINITY,
        integral: false,
        priority: 0,
    });
    index.insert(name.to_string(), i);
    i
}

/// A binary colour map is recoverable when node variables are named
/// `x_0..x_{n-1}` without gaps.
fn recover_colour_map(
    vars: &[Variable],
    index: &std::collections::HashMap<String, usize>,
) -> ColourMap {
    let mut node_var = Vec::new();
    for i in 0.. {
        match index.get(&format!("x_{i}")) {
            Some(&v) if vars[v].integral => node_var.push(v),
            _ => break,
        }
    }
    if node_var.is_empty() {
        ColourMap::None
    } else {
        ColourMap::Binary { node_var }
    }
}

fn parse_terms(
    text: &str,
    lineno: usize,
    vars: &mut Vec<Variable>,
    index: &mut std::collections::HashMap<String, usize>,
) -> Result<Vec<(usize, f64)>, ExportError> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for tok in text.split_whitespace() {
        match tok {
            "+" => {}
            "-" => sign = -sign,
            _ => {
                let (s, rest) = match tok.strip_prefix('-') {
                    Some(r) => (-1.0, r),
                    None => (1.0, tok.strip_prefix('+').unwrap_or(tok)),
                };
                if rest.is_empty() {
                    sign *= s;
                    continue;
                }
                if let Ok(num) = rest.parse::<f64>() {
                    if coef.is_some() {
                        return Err(ExportError::Parse {
                            line: lineno,
                            message: format!("two coefficients in a row near '{tok}'"),
                        });
                    }
                    coef = Some(sign * s * num);
                } else {
                    let c = coef.take().unwrap_or(sign * s);
                    terms.push((intern(rest, vars, index), c));
                    sign = 1.0;
                }
            }
        }
    }
    match coef {
        Some(c) if c != 0.0 => Err(ExportError::Parse {
            line: lineno,
            message: "dangling coefficient".to_string(),
        }),
        _ => Ok(terms),
    }
}

fn parse_bound_line(
    line: &str,
    lineno: usize,
    vars: &mut Vec<Variable>,
    index: &mut std::collections::HashMap<String, usize>,
) -> Result<(), ExportError> {
    let parts: Vec<&str> = line.split_whitespace().collect();
    let err = |m: &str| ExportError::Parse {
        line: lineno,
        message: m.to_string(),
    };
    match parts.as_slice() {
        [lo, "<=", name, "<=", up] => {
            let i = intern(name, vars, index);
            vars[i].lower = lo.parse().map_err(|_| err("bad lower bound"))?;
            vars[i].upper = up.parse().map_err(|_| err("bad upper bound"))?;
        }
        [name, "<=", up] => {
            let i = intern(name, vars, index);
            vars[i].upper = up.parse().map_err(|_| err("bad upper bound"))?;
        }
        [name, ">=", lo] => {
            let i = intern(name, vars, index);
            vars[i].lower = lo.parse().map_err(|_| err("bad lower bound"))?;
        }
        [name, "=", v] => {
            let i = intern(name, vars, index);
            let v: f64 = v.parse().map_err(|_| err("bad fixed value"))?;
            vars[i].lower = v;
            vars[i].upper = v;
        }
        _ => return Err(err("unrecognised bounds line")),
    }
    Ok(())
}
