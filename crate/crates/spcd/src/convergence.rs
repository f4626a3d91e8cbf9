//! The double-mesh convergence protocol: (ε, N) sweeps, two-mesh differences
//! D^N_ε, local and uniform orders p̄^N_ε / p̄^N, and log-factor constants
//! C^N_p = N² (ln N)^{-p} D^N, rendered as markdown or CSV tables.
//!
//! Each mesh level computes its own transition parameters, so the N- and
//! 2N-meshes are not nested; differences are taken between the bilinear
//! interpolants over all of [0,1]² (exact sup via the overlay grid).

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linsolve::{self, DEFAULT_TOL};
use crate::mesh::TensorMesh;
use crate::problem::ProblemSpec;
use crate::scheme::{assemble_fitted, assemble_upwind, SchemeTag};
use crate::solution::{sup_diff, GridFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MRule {
    /// M = N (the default used by all benchmark tables).
    EqualN,
    /// Fixed M for every level.
    Explicit(usize),
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub problem: ProblemSpec,
    pub scheme: SchemeTag,
    /// Defaults to {2^-i : i = 0..=20}.
    pub eps_list: Vec<f64>,
    /// Powers of 2; D^N is produced for every entry (solving the 2N partner
    /// of the largest), local orders for every entry whose 2N is also listed.
    pub n_list: Vec<usize>,
    pub m_rule: MRule,
    pub tol: f64,
}

impl SweepConfig {
    pub fn new(problem: ProblemSpec, scheme: SchemeTag) -> Self {
        SweepConfig {
            problem,
            scheme,
            eps_list: (0..=20).map(|i| 2.0f64.powi(-i)).collect(),
            n_list: (3..=8).map(|k| 1usize << k).collect(),
            m_rule: MRule::EqualN,
            tol: DEFAULT_TOL,
        }
    }
}

/// Sweep results. Tables are indexed `[eps_index][n_index]`; `None` marks a
/// cell that could not be computed (failed solve or missing 2N partner).
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub eps_list: Vec<f64>,
    pub n_list: Vec<usize>,
    /// D^N_ε = ‖Ū^N - Ū^{2N}‖_∞.
    pub d: Vec<Vec<Option<f64>>>,
    /// p̄^N_ε = log₂(D^N_ε / D^{2N}_ε).
    pub p_local: Vec<Vec<Option<f64>>>,
    /// D^N = max_ε D^N_ε.
    pub d_uniform: Vec<Option<f64>>,
    /// p̄^N = log₂(D^N / D^{2N}).
    pub p_uniform: Vec<Option<f64>>,
}

impl ConvergenceReport {
    pub fn eps_index(&self, eps: f64) -> Option<usize> {
        self.eps_list.iter().position(|&e| e == eps)
    }

    pub fn n_index(&self, n: usize) -> Option<usize> {
        self.n_list.iter().position(|&v| v == n)
    }
}

fn solve_level(
    p: &ProblemSpec,
    scheme: SchemeTag,
    eps: f64,
    n: usize,
    m: usize,
    tol: f64,
) -> Result<GridFunction> {
    let mesh = TensorMesh::shishkin(eps, p.alpha, n, m)?;
    let sys = match scheme {
        SchemeTag::Fitted => assemble_fitted(p, &mesh, eps)?,
        SchemeTag::Upwind => assemble_upwind(p, &mesh, eps)?,
    };
    Ok(linsolve::solve(&sys, tol)?.0)
}

fn m_for(rule: MRule, n: usize) -> usize {
    match rule {
        MRule::EqualN => n,
        MRule::Explicit(m) => m,
    }
}

/// D^N_ε for one (ε, N) cell: solve on the N- and 2N-meshes (each with its
/// own transition parameters) and take the exact interpolant sup-difference.
pub fn two_mesh_diff(p: &ProblemSpec, scheme: SchemeTag, eps: f64, n: usize) -> Result<f64> {
    two_mesh_pair(p, scheme, eps, n, 2 * n)
}

/// Test hook: the same protocol between two arbitrary levels.
#[doc(hidden)]
pub fn two_mesh_pair(
    p: &ProblemSpec,
    scheme: SchemeTag,
    eps: f64,
    na: usize,
    nb: usize,
) -> Result<f64> {
    let ua = solve_level(p, scheme, eps, na, na, DEFAULT_TOL)?;
    let ub = solve_level(p, scheme, eps, nb, nb, DEFAULT_TOL)?;
    Ok(sup_diff(&ua, &ub))
}

/// Local and uniform orders from a D table (rows: ε, columns: n_list).
/// The order at N needs D^{2N}: entries whose doubling is absent stay `None`.
pub fn orders(
    n_list: &[usize],
    d: &[Vec<Option<f64>>],
) -> (Vec<Vec<Option<f64>>>, Vec<Option<f64>>, Vec<Option<f64>>) {
    let order_row = |row: &[Option<f64>]| -> Vec<Option<f64>> {
        (0..n_list.len())
            .map(|k| {
                let twice = n_list.iter().position(|&v| v == 2 * n_list[k])?;
                match (row[k], row[twice]) {
                    (Some(dn), Some(d2n)) if dn > 0.0 && d2n > 0.0 => Some((dn / d2n).log2()),
                    _ => None,
                }
            })
            .collect()
    };
    let p_local: Vec<Vec<Option<f64>>> = d.iter().map(|row| order_row(row)).collect();
    let d_uniform: Vec<Option<f64>> = (0..n_list.len())
        .map(|k| {
            d.iter()
                .filter_map(|row| row[k])
                .fold(None, |acc: Option<f64>, v| {
                    Some(acc.map_or(v, |a| a.max(v)))
                })
        })
        .collect();
    let p_uniform = order_row(&d_uniform);
    (p_local, d_uniform, p_uniform)
}

/// C^N_p = N² (ln N)^{-p} D^N for each N in `n_list`.
pub fn constants(n_list: &[usize], d_uniform: &[Option<f64>], p: u32) -> Vec<Option<f64>> {
    n_list
        .iter()
        .zip(d_uniform)
        .map(|(&n, d)| {
            d.map(|d| {
                let nf = n as f64;
                nf * nf * nf.ln().powi(-(p as i32)) * d
            })
        })
        .collect()
}

/// Runs the full sweep. ε cells are independent and run in parallel; within
/// one ε, each mesh level is solved once and reused for both D^N_ε values
/// that touch it.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ConvergenceReport> {
    if cfg.eps_list.is_empty() || cfg.n_list.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep needs nonempty eps and N lists".into(),
        ));
    }
    let mut levels: BTreeSet<usize> = cfg.n_list.iter().copied().collect();
    for &n in &cfg.n_list {
        levels.insert(2 * n);
    }
    let levels: Vec<usize> = levels.into_iter().collect();

    let d: Vec<Vec<Option<f64>>> = cfg
        .eps_list
        .par_iter()
        .map(|&eps| {
            let sols: Vec<Option<GridFunction>> = levels
                .iter()
                .map(|&n| {
                    solve_level(
                        &cfg.problem,
                        cfg.scheme,
                        eps,
                        n,
                        m_for(cfg.m_rule, n),
                        cfg.tol,
                    )
                    .ok()
                })
                .collect();
            cfg.n_list
                .iter()
                .map(|&n| {
                    let ka = levels.iter().position(|&v| v == n)?;
                    let kb = levels.iter().position(|&v| v == 2 * n)?;
                    match (&sols[ka], &sols[kb]) {
                        (Some(ua), Some(ub)) => Some(sup_diff(ua, ub)),
                        _ => None,
                    }
                })
                .collect()
        })
        .collect();

    let (p_local, d_uniform, p_uniform) = orders(&cfg.n_list, &d);
    Ok(ConvergenceReport {
        eps_list: cfg.eps_list.clone(),
        n_list: cfg.n_list.clone(),
        d,
        p_local,
        d_uniform,
        p_uniform,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Markdown,
    Csv,
}

impl TableFormat {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "md" => Ok(TableFormat::Markdown),
            "csv" => Ok(TableFormat::Csv),
            _ => Err(Error::InvalidArgument(format!(
                "unknown format {name:?}; expected md|csv"
            ))),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            TableFormat::Markdown => "md",
            TableFormat::Csv => "csv",
        }
    }
}

/// Labels 2^-k exactly when ε is a pure (negative) power of two.
pub fn eps_label(eps: f64) -> String {
    let l = eps.log2();
    if l.fract() == 0.0 && (-60.0..=0.0).contains(&l) {
        format!("2^{}", l as i64)
    } else {
        format!("{eps}")
    }
}

fn fmt_cell(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.4}"),
        None => String::new(),
    }
}

fn table(
    format: TableFormat,
    corner: &str,
    cols: &[String],
    rows: &[(String, Vec<Option<f64>>)],
) -> String {
    let mut s = String::new();
    match format {
        TableFormat::Markdown => {
            s.push_str(&format!("| {corner} |"));
            for c in cols {
                s.push_str(&format!(" {c} |"));
            }
            s.push('\n');
            s.push_str(&"|---".repeat(cols.len() + 1));
            s.push_str("|\n");
            for (label, vals) in rows {
                s.push_str(&format!("| {label} |"));
                for &v in vals {
                    let cell = fmt_cell(v);
                    if cell.is_empty() {
                        s.push_str(" - |");
                    } else {
                        s.push_str(&format!(" {cell} |"));
                    }
                }
                s.push('\n');
            }
        }
        TableFormat::Csv => {
            s.push_str(corner);
            for c in cols {
                s.push_str(&format!(",{c}"));
            }
            s.push('\n');
            for (label, vals) in rows {
                s.push_str(label);
                for &v in vals {
                    s.push(',');
                    s.push_str(&fmt_cell(v));
                }
                s.push('\n');
            }
        }
    }
    s
}

/// Orders table: one row of p̄^N_ε per ε, a final p̄^N row; columns are the
/// N values for which an order is defined. 4-decimal fixed format.
pub fn render(report: &ConvergenceReport, format: TableFormat) -> String {
    let keep: Vec<usize> = (0..report.n_list.len())
        .filter(|&k| {
            report.p_uniform[k].is_some() || report.p_local.iter().any(|row| row[k].is_some())
        })
        .collect();
    let cols: Vec<String> = keep.iter().map(|&k| report.n_list[k].to_string()).collect();
    if cols.is_empty() {
        return table(format, "eps \\ N", &cols, &[]);
    }
    let mut rows: Vec<(String, Vec<Option<f64>>)> = report
        .eps_list
        .iter()
        .zip(&report.p_local)
        .map(|(&eps, row)| (eps_label(eps), keep.iter().map(|&k| row[k]).collect()))
        .collect();
    rows.push((
        "uniform".to_string(),
        keep.iter().map(|&k| report.p_uniform[k]).collect(),
    ));
    table(format, "eps \\ N", &cols, &rows)
}

/// Constants table: a single C^N_p row over all N in the sweep.
pub fn render_constants(report: &ConvergenceReport, p: u32, format: TableFormat) -> String {
    let cols: Vec<String> = report.n_list.iter().map(|n| n.to_string()).collect();
    let rows = vec![(
        format!("C^N_{p}"),
        constants(&report.n_list, &report.d_uniform, p),
    )];
    table(format, "p \\ N", &cols, &rows)
}
