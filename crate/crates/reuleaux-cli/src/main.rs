//! Command-line front end: areas, gradients, Hessians, multipliers,
//! optimization runs, the A_n sweep, the certification suite and SVG
//! rendering.
//!
//! Polygon inputs are JSON files `{"n": int, "vertices": [[x,y],...]}` or
//! generator specs `regular:N` / `random:N[:seed=S]`. Exit codes: 0 on
//! success, 1 on verification failure, 2 on usage or parse errors.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use reuleaux::area::{area_disk_polygon, area_regular_reuleaux, sweep_csv};
use reuleaux::error::Error;
use reuleaux::geom::{
    build_regular_reuleaux, DiskPolygon, PerturbationField, Point2, ReuleauxPolygon,
};
use reuleaux::lagrangian::{
    hessian_area_centers, hessian_lagrangian_vertices, multiplier_report,
    solve_multipliers_vertices,
};
use reuleaux::optimize::{random_reuleaux, run as optimize_run, Mode, OptimizeConfig};
use reuleaux::sensitivity::{area_gradient_disk_polygon, gradient_reuleaux};
use reuleaux::verify::{full_certification, reports_to_json};
use reuleaux::{io as polyio, Result};

#[derive(Parser)]
#[command(name = "reuleaux", version, about = "Constant-width polygon toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HessKind {
    /// Hessian of the vertex-formulation Lagrangian.
    Vertices,
    /// Hessian of the area with respect to the disk centers.
    Centers,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OptMode {
    Maximize,
    Minimize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Area of a disk-polygon, split into polygon and segment parts.
    Area {
        /// Polygon JSON path or generator spec (regular:N, random:N:seed=S).
        #[arg(long)]
        input: String,
        /// Output path (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Seed for random generator specs without an explicit seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Constrained per-vertex area gradient of a Reuleaux polygon.
    Grad {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Dense 2n x 2n Hessian dump as CSV.
    Hess {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = HessKind::Vertices)]
        mode: HessKind,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Lagrange multipliers of both formulations with residuals, as JSON.
    Multipliers {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Constrained area ascent/descent; prints the final polygon JSON.
    Optimize {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum)]
        mode: OptMode,
        /// Trace CSV path (iter,n,area,grad_norm,theta_min,theta_max).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Gradient-norm convergence tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// CSV table n,A_n of regular areas for n = 3, 5, ..., n-max.
    Sweep {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run every oracle pairing and acceptance check; exit 0 iff all pass.
    Certify {
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Render a polygon as SVG with circular boundary arcs.
    Render {
        #[arg(long)]
        input: String,
        #[arg(long)]
        output: PathBuf,
        /// User units per width unit.
        #[arg(long, default_value_t = 300.0)]
        scale: f64,
        /// Overlay per-vertex gradient arrows.
        #[arg(long)]
        show_gradient: bool,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn resolve_vertices(input: &str, seed: Option<u64>) -> Result<Vec<Point2>> {
    if let Some(rest) = input.strip_prefix("regular:") {
        let n: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator spec regular:{rest}")))?;
        return Ok(build_regular_reuleaux(n)?.vertices().to_vec());
    }
    if let Some(rest) = input.strip_prefix("random:") {
        let mut parts = rest.split(':');
        let n: usize = parts
            .next()
            .unwrap_or_default()
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator spec random:{rest}")))?;
        let mut s = seed.unwrap_or(0);
        for part in parts {
            match part.strip_prefix("seed=") {
                Some(v) => {
                    s = v
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad seed in random:{rest}")))?;
                }
                None => return Err(Error::Parse(format!("bad generator spec random:{rest}"))),
            }
        }
        return Ok(random_reuleaux(n, s)?.vertices().to_vec());
    }
    polyio::load_vertices(Path::new(input))
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(Error::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gradient_field(vertices: &[Point2]) -> Result<(PerturbationField, &'static str)> {
    match ReuleauxPolygon::from_vertices(vertices) {
        Ok(r) if r.n() > 3 => {
            let field: Vec<Point2> =
                (0..r.n()).map(|i| gradient_reuleaux(&r, i)).collect::<Result<_>>()?;
            Ok((PerturbationField::new(field), "constrained"))
        }
        Ok(r) => Ok((PerturbationField::zeros(r.n()), "constrained")),
        Err(_) => {
            let dp = DiskPolygon::from_vertices(vertices)?;
            Ok((area_gradient_disk_polygon(&dp)?, "unconstrained"))
        }
    }
}

fn run_command(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Area { input, output, seed } => {
            let vertices = resolve_vertices(&input, seed)?;
            let dp = DiskPolygon::from_vertices(&vertices)?;
            let b = area_disk_polygon(&dp);
            let json = serde_json::json!({
                "n": dp.n(),
                "polygon_part": b.polygon_part,
                "segment_parts": b.segment_parts,
                "total": b.total,
            });
            emit(&output, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))?;
            Ok(0)
        }
        Cmd::Grad { input, output, seed } => {
            let vertices = resolve_vertices(&input, seed)?;
            let r = ReuleauxPolygon::from_vertices(&vertices)?;
            let grads: Vec<[f64; 2]> = if r.n() == 3 {
                vec![[0.0, 0.0]; 3] // the triangle is rigid
            } else {
                (0..r.n())
                    .map(|i| gradient_reuleaux(&r, i).map(|g| [g.x(), g.y()]))
                    .collect::<Result<_>>()?
            };
            let max_norm = grads
                .iter()
                .map(|g| (g[0] * g[0] + g[1] * g[1]).sqrt())
                .fold(0.0f64, f64::max);
            let json = serde_json::json!({ "n": r.n(), "gradient": grads, "max_norm": max_norm });
            emit(&output, &format!("{}\n", serde_json::to_string_pretty(&json).unwrap()))?;
            Ok(0)
        }
        Cmd::Hess { input, mode, output, seed } => {
            let vertices = resolve_vertices(&input, seed)?;
            let r = ReuleauxPolygon::from_vertices(&vertices)?;
            let h = match mode {
                HessKind::Vertices => {
                    let (m, _) = solve_multipliers_vertices(&r)?;
                    hessian_lagrangian_vertices(&r, &m)?
                }
                HessKind::Centers => hessian_area_centers(&r)?,
            };
            emit(&output, &h.to_csv())?;
            Ok(0)
        }
        Cmd::Multipliers { input, output, seed } => {
            let vertices = resolve_vertices(&input, seed)?;
            let r = ReuleauxPolygon::from_vertices(&vertices)?;
            let report = multiplier_report(&r)?;
            emit(&output, &format!("{}\n", serde_json::to_string_pretty(&report).unwrap()))?;
            Ok(0)
        }
        Cmd::Optimize { input, mode, output, tol, seed } => {
            let vertices = resolve_vertices(&input, seed)?;
            let r0 = ReuleauxPolygon::from_vertices(&vertices)?;
            let mut cfg = match mode {
                OptMode::Maximize => OptimizeConfig::maximize(),
                OptMode::Minimize => OptimizeConfig::minimize(),
            };
            if let Some(t) = tol {
                cfg.grad_tol = t;
            }
            let (r, trace) = optimize_run(&r0, &cfg)?;
            if let Some(path) = &output {
                std::fs::write(path, trace.to_csv())?;
            }
            let last = trace.rows.last().expect("trace never empty");
            eprintln!(
                "{} -> n = {}, area = {:.12}, grad_norm = {:.3e}, {} accepted steps",
                match cfg.mode {
                    Mode::Maximize => "maximize",
                    Mode::Minimize => "minimize",
                },
                r.n(),
                last.area,
                last.grad_norm,
                trace.rows.len() - 1
            );
            println!("{}", polyio::polygon_to_json(r.vertices())?);
            Ok(0)
        }
        Cmd::Sweep { n_max, output } => {
            let csv = sweep_csv(n_max)?;
            // the sweep gate: strictly increasing areas
            let mut prev = f64::NEG_INFINITY;
            let mut n = 3;
            let mut monotone = true;
            while n <= n_max {
                let a = area_regular_reuleaux(n)?;
                monotone &= a > prev;
                prev = a;
                n += 2;
            }
            emit(&output, &csv)?;
            Ok(if monotone { 0 } else { 1 })
        }
        Cmd::Certify { output } => {
            let reports = full_certification();
            for r in &reports {
                eprintln!("{} {}", if r.pass { "PASS" } else { "FAIL" }, r.name);
            }
            emit(&output, &format!("{}\n", reports_to_json(&reports)?))?;
            Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Cmd::Render { input, output, scale, show_gradient, seed } => {
            let vertices = resolve_vertices(&input, seed)?;
            let dp = DiskPolygon::from_vertices(&vertices)?;
            let field = if show_gradient { Some(gradient_field(&vertices)?.0) } else { None };
            let svg = render::render_svg(&dp, scale, field.as_ref());
            std::fs::write(&output, svg)?;
            Ok(0)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::Io(_)
        | Error::InvalidN { .. }
        | Error::NonFinite
        | Error::InvalidPolygon { .. }
        | Error::NotConstantWidth(_)
        | Error::OutOfRange { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_command(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::NotConstantWidth(report) = &e {
                eprintln!("{report}");
            }
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
