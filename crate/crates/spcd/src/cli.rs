//! Command-line front end: single solves with grid/slice export, (ε, N)
//! convergence sweeps rendered as order/constant tables, and diagnostics.
//!
//! Exit codes: 0 success, 1 solver or I/O failure (or a failed diagnostic),
//! 2 argument errors. Output files are written atomically (temp + rename).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::convergence::{
    render, render_constants, run_sweep, MRule, SweepConfig, TableFormat,
};
use crate::diagnostics::{check_m_matrix, minimum_principle_probe, truncation_probe};
use crate::error::{Error, Result};
use crate::linsolve::{self, DEFAULT_TOL};
use crate::mesh::TensorMesh;
use crate::problem;
use crate::scheme::{assemble_fitted, assemble_upwind, SchemeTag};
use crate::solution::{export_grid, export_slice, grid_csv, SliceAxis};

/// Environment variable naming the default output directory for sweeps.
pub const OUT_DIR_ENV: &str = "SPCD_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "spcd",
    version,
    about = "Fitted finite-difference solver for singularly perturbed convection-diffusion problems on Shishkin meshes"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one (problem, scheme, eps, N) instance and export the grid.
    Solve(SolveArgs),
    /// Run an (eps, N) sweep and write order / constant tables.
    Convergence(ConvArgs),
    /// Run M-matrix, minimum-principle and truncation diagnostics.
    Diagnose(DiagArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// example1 | example2 | example3
    #[arg(long)]
    problem: String,
    /// fitted | upwind
    #[arg(long, default_value = "fitted")]
    scheme: String,
    /// Diffusion parameter; `2^-k` (exact) or a decimal like `1e-3`.
    #[arg(long)]
    eps: String,
    /// Cells per axis in x (even).
    #[arg(long)]
    n: usize,
    /// Cells in y (divisible by 4); defaults to N.
    #[arg(long)]
    m: Option<usize>,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Slice export, e.g. `y=0` or `x=0.5`; repeatable; requires --out.
    /// Written next to the grid as `<stem>.<slice>.csv`.
    #[arg(long)]
    slice: Vec<String>,
}

#[derive(Args)]
struct ConvArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value = "fitted")]
    scheme: String,
    /// Smallest N in the sweep (power of 2).
    #[arg(long, default_value_t = 8)]
    n_min: usize,
    /// Largest N carrying a D^N value; its 2N partner is still solved.
    #[arg(long, default_value_t = 256)]
    n_max: usize,
    /// eps sweeps over 2^-k for k in eps-min-pow..=eps-max-pow.
    #[arg(long, default_value_t = 0)]
    eps_min_pow: u32,
    #[arg(long, default_value_t = 20)]
    eps_max_pow: u32,
    /// Also write C^N_p tables for these p values, e.g. `1,2,3`.
    #[arg(long)]
    constants: Option<String>,
    /// md | csv
    #[arg(long, default_value = "md")]
    format: String,
    /// Worker threads for the eps sweep; defaults to available cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory; defaults to $SPCD_OUT_DIR, then the current dir.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct DiagArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    eps: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    /// Also run the two-level truncation-consistency ratios.
    #[arg(long)]
    truncation: bool,
    /// Optional CSV report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `2^-k` exactly, or any positive decimal.
pub fn parse_eps(s: &str) -> Result<f64> {
    let bad = || Error::InvalidArgument(format!("cannot parse eps {s:?}"));
    let v = if let Some(exp) = s.strip_prefix("2^") {
        let k: i32 = exp.parse().map_err(|_| bad())?;
        2.0f64.powi(k)
    } else {
        s.parse().map_err(|_| bad())?
    };
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::InvalidArgument(format!("eps must be > 0, got {s}")));
    }
    Ok(v)
}

fn parse_slice(s: &str) -> Result<(SliceAxis, f64)> {
    let bad = || {
        Error::InvalidArgument(format!(
            "cannot parse slice {s:?}; expected x=<value> or y=<value>"
        ))
    };
    let (axis, rest) = s.split_once('=').ok_or_else(bad)?;
    let value: f64 = rest.parse().map_err(|_| bad())?;
    match axis {
        "x" => Ok((SliceAxis::XConst, value)),
        "y" => Ok((SliceAxis::YConst, value)),
        _ => Err(bad()),
    }
}

fn slice_path(out: &Path, spec: &str) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    out.with_file_name(format!("{stem}.{spec}.csv"))
}

fn cmd_solve(args: &SolveArgs) -> Result<()> {
    let p = problem::by_name(&args.problem)?;
    let scheme = SchemeTag::by_name(&args.scheme)?;
    let eps = parse_eps(&args.eps)?;
    let m = args.m.unwrap_or(args.n);
    if !args.slice.is_empty() && args.out.is_none() {
        return Err(Error::InvalidArgument(
            "--slice requires --out (slices are written next to the grid file)".into(),
        ));
    }
    let slices: Vec<(SliceAxis, f64, String)> = args
        .slice
        .iter()
        .map(|s| parse_slice(s).map(|(a, v)| (a, v, s.clone())))
        .collect::<Result<_>>()?;

    let mesh = TensorMesh::shishkin(eps, p.alpha, args.n, m)?;
    let sys = match scheme {
        SchemeTag::Fitted => assemble_fitted(&p, &mesh, eps)?,
        SchemeTag::Upwind => assemble_upwind(&p, &mesh, eps)?,
    };
    let (u, stats) = linsolve::solve(&sys, DEFAULT_TOL)?;
    match &args.out {
        Some(path) => {
            export_grid(&u, path)?;
            for (axis, value, spec) in &slices {
                export_slice(&u, *axis, *value, &slice_path(path, spec))?;
            }
            eprintln!(
                "solved {} / {} at eps={}, N={}, M={}: residual {:.2e}, {:.2}s",
                p.label,
                scheme.name(),
                args.eps,
                args.n,
                m,
                stats.residual_inf,
                stats.wall_time
            );
        }
        None => print!("{}", grid_csv(&u)),
    }
    Ok(())
}

fn cmd_convergence(args: &ConvArgs) -> Result<()> {
    let p = problem::by_name(&args.problem)?;
    let scheme = SchemeTag::by_name(&args.scheme)?;
    let format = TableFormat::by_name(&args.format)?;
    if args.eps_min_pow > args.eps_max_pow {
        return Err(Error::InvalidArgument(
            "--eps-min-pow must not exceed --eps-max-pow".into(),
        ));
    }
    let pow2 = |v: usize| v >= 8 && v.is_power_of_two();
    if !pow2(args.n_min) || !pow2(args.n_max) || args.n_min > args.n_max {
        return Err(Error::InvalidArgument(format!(
            "N range must be powers of 2 with 8 <= n-min <= n-max, got {}..{}",
            args.n_min, args.n_max
        )));
    }
    let const_ps: Vec<u32> = match &args.constants {
        None => Vec::new(),
        Some(s) => s
            .split(',')
            .map(|t| {
                t.trim().parse().map_err(|_| {
                    Error::InvalidArgument(format!("cannot parse --constants entry {t:?}"))
                })
            })
            .collect::<Result<_>>()?,
    };
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(Error::InvalidArgument("--jobs must be >= 1".into()));
        }
        // Ignore the error if a global pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let mut cfg = SweepConfig::new(p, scheme);
    cfg.eps_list = (args.eps_min_pow..=args.eps_max_pow)
        .map(|k| 2.0f64.powi(-(k as i32)))
        .collect();
    cfg.n_list = (args.n_min.trailing_zeros()..=args.n_max.trailing_zeros())
        .map(|k| 1usize << k)
        .collect();
    cfg.m_rule = MRule::EqualN;
    let report = run_sweep(&cfg)?;

    let base = format!("{}_{}", cfg.problem.label, scheme.name());
    let ext = format.extension();
    let orders_path = out_dir.join(format!("{base}_orders.{ext}"));
    crate::solution::write_atomic(&orders_path, &render(&report, format))?;
    eprintln!("wrote {}", orders_path.display());
    for p in const_ps {
        let path = out_dir.join(format!("{base}_constants_p{p}.{ext}"));
        crate::solution::write_atomic(&path, &render_constants(&report, p, format))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_diagnose(args: &DiagArgs) -> Result<()> {
    let p = problem::by_name(&args.problem)?;
    let eps = parse_eps(&args.eps)?;
    let m = args.m.unwrap_or(args.n);
    let mesh = TensorMesh::shishkin(eps, p.alpha, args.n, m)?;

    let mut lines: Vec<(String, String, bool)> = Vec::new();
    for (tag, sys) in [
        ("fitted", assemble_fitted(&p, &mesh, eps)?),
        ("upwind", assemble_upwind(&p, &mesh, eps)?),
    ] {
        let rep = check_m_matrix(&sys);
        lines.push((
            format!("m_matrix_{tag}"),
            format!("{} rows checked", rep.checked_rows),
            rep.pass,
        ));
    }
    let min_u = minimum_principle_probe(&p, eps, args.n, m)?;
    lines.push((
        "minimum_principle".into(),
        format!("min U = {min_u:e}"),
        min_u >= -1e-10,
    ));
    if args.truncation {
        let probe = truncation_probe(&p, eps, args.n)?;
        lines.push((
            "truncation_uniform_ratio".into(),
            format!("{:.4}", probe.uniform_ratio),
            (3.5..=4.5).contains(&probe.uniform_ratio),
        ));
        if let Some(order) = probe.transition_order {
            lines.push((
                "truncation_transition_order".into(),
                format!("{order:.4}"),
                (0.7..=1.5).contains(&order),
            ));
        }
    }

    let mut all_pass = true;
    for (name, detail, pass) in &lines {
        println!("{name}: {} ({detail})", if *pass { "pass" } else { "FAIL" });
        all_pass &= *pass;
    }
    if let Some(path) = &args.out {
        let mut csv = String::from("check,detail,pass\n");
        for (name, detail, pass) in &lines {
            csv.push_str(&format!("{name},{},{pass}\n", detail.replace(',', ";")));
        }
        crate::solution::write_atomic(path, &csv)?;
    }
    if all_pass {
        Ok(())
    } else {
        Err(Error::DiagnosticsFailed)
    }
}

/// Dispatches a parsed command line; the binary maps the error to exit codes.
pub fn run(cli: Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Convergence(a) => cmd_convergence(a),
        Cmd::Diagnose(a) => cmd_diagnose(a),
    }
}
