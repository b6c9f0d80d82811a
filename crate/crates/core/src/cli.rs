//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or admissibility failure, 2 parse,
//! I/O or usage error, 3 degenerate geometry.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::analysis::{analyze, Tolerances};
use crate::error::{Error, Result};
use crate::example::example_curves;
use crate::io::{
    polylines_from_report, read_curves, write_file, write_report, write_smooth_report,
    CurvePairFile, SmoothChainReport, SmoothReport,
};
use crate::mesh::{export_obj, tessellate};
use crate::net::{validate_generic_position, AsymptoticNet};
use crate::predicates::DEFAULT_TOL;
use crate::singularity::{Kind, MetricField, DEFAULT_EPS_DEGENERATE};
use crate::smooth::{
    check_regularity, find_swallowtails, lambda_along_curve, trace_singular_curve, SmoothCurvePair,
    SmoothKind, DEFAULT_TRACE_TOL,
};

#[derive(Debug, Parser)]
#[command(
    name = "diams",
    version,
    about = "Singularities of discrete indefinite affine minimal surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify the singular set of a curve pair and write a JSON report.
    Analyze {
        #[arg(long)]
        curves: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Relative tolerance of the sign predicates.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Tessellate the interpolating patches and write an OBJ file.
    Mesh {
        #[arg(long)]
        curves: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        subdiv: u32,
        /// Analyze report whose singular chains are marked; computed when absent.
        #[arg(long)]
        singular: Option<PathBuf>,
    },
    /// Check a curve pair for generic position, degenerate quads and
    /// admissibility.
    Validate {
        #[arg(long)]
        curves: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Write the four-quadrangle example pair.
    Example {
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, default_value_t = 0.1)]
        du: f64,
        #[arg(long, default_value_t = 0.1)]
        dv: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the smooth model on a built-in pair (identity, parabolic, symmetric).
    Oracle {
        #[arg(long)]
        pair: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(16..))]
        grid: u32,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRACE_TOL)]
        tol: f64,
    },
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Validation(_)
        | Error::InvalidCurve(_)
        | Error::InadmissibleVertex(_)
        | Error::SharedEdgeMismatch => 1,
        Error::Parse(_)
        | Error::Io { .. }
        | Error::IndexOutOfDomain(_)
        | Error::BoundaryVertex(_)
        | Error::OutOfRange { .. }
        | Error::ParameterOutOfRange(_) => 2,
        Error::IntersectingCurves(_)
        | Error::DegenerateMetric { .. }
        | Error::DegenerateOrientation(_)
        | Error::NonGenericCell { .. }
        | Error::DegenerateDirection { .. }
        | Error::NonGenericChain { .. } => 3,
    }
}

fn check_tol(tol: f64) -> Result<f64> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(Error::ParameterOutOfRange(format!("tolerance {tol}")))
    }
}

fn sign_tolerances(tol: f64) -> Result<Tolerances> {
    let tol = check_tol(tol)?;
    Ok(Tolerances {
        orient: tol,
        generic_position: tol,
        ..Tolerances::default()
    })
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Analyze {
            curves,
            report,
            tol,
        } => {
            let net = read_curves(&curves)?.net()?;
            let a = analyze(&net, sign_tolerances(tol)?)?;
            write_file(&report, &write_report(&a))?;
            let swallowtails = a
                .vertices
                .iter()
                .filter(|v| v.kind == Kind::Swallowtail)
                .count();
            println!(
                "{} singular edges, {} singular vertices, {} swallowtails, {} chains",
                a.singular_edges.len(),
                a.vertices.len(),
                swallowtails,
                a.polylines.len()
            );
            for g in &a.generic_position {
                eprintln!(
                    "warning: generic position fails at vertex {}: planes through {} and {} coincide",
                    g.vertex,
                    g.first.label(),
                    g.second.label()
                );
            }
            for v in &a.admissibility {
                eprintln!("inadmissible singular vertex {}", v.vertex);
            }
            Ok(if a.is_admissible() { 0 } else { 1 })
        }
        Command::Mesh {
            curves,
            out,
            subdiv,
            singular,
        } => {
            let net = read_curves(&curves)?.net()?;
            let chains = match singular {
                Some(path) => {
                    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
                    polylines_from_report(&bytes)?
                }
                None => analyze(&net, Tolerances::default())?.polylines,
            };
            let f = AsymptoticNet::integrate(&net)?;
            let mesh = tessellate(&f, subdiv as usize, &chains)?;
            export_obj(&mesh, &out)?;
            println!(
                "{} vertices, {} triangles, {} singular chains",
                mesh.vertices.len(),
                mesh.triangles.len(),
                mesh.polylines.len()
            );
            Ok(0)
        }
        Command::Validate { curves, tol } => {
            let tol = check_tol(tol)?;
            let net = read_curves(&curves)?.net()?;
            let mut failed = false;
            for g in validate_generic_position(&net, tol) {
                failed = true;
                println!(
                    "generic position: vertex {}: planes through {} and {} coincide (sine {:e})",
                    g.vertex,
                    g.first.label(),
                    g.second.label(),
                    g.sine
                );
            }
            let metric = MetricField::evaluate(&net);
            let degenerate = metric.degenerate_quads(DEFAULT_EPS_DEGENERATE);
            for (q, w) in &degenerate {
                println!("degenerate metric: quad {q}: omega = {w:e}");
            }
            if let Some(&(quad, value)) = degenerate.first() {
                return Err(Error::DegenerateMetric { quad, value });
            }
            let a = analyze(&net, sign_tolerances(tol)?)?;
            for v in &a.admissibility {
                failed = true;
                println!(
                    "admissibility: singular vertex {} is inadmissible",
                    v.vertex
                );
            }
            if !failed {
                println!("ok");
            }
            Ok(i32::from(failed))
        }
        Command::Example { y, du, dv, out } => {
            let (a, b) = example_curves(y, du, dv).map_err(|e| match e {
                Error::InvalidCurve(m) => Error::ParameterOutOfRange(m),
                e => e,
            })?;
            write_file(&out, &CurvePairFile::from_curves(&a, &b).to_bytes())?;
            Ok(0)
        }
        Command::Oracle {
            pair,
            grid,
            report,
            tol,
        } => {
            let tol = check_tol(tol)?;
            let p = SmoothCurvePair::by_name(&pair).ok_or_else(|| {
                Error::ParameterOutOfRange(format!(
                    "unknown pair {pair:?}; expected one of {}",
                    SmoothCurvePair::CATALOG.join(", ")
                ))
            })?;
            let chains = trace_singular_curve(&p, grid as usize, tol)?;
            let mut out = Vec::with_capacity(chains.len());
            for chain in chains {
                let points = match find_swallowtails(&p, &chain) {
                    Ok(pts) => Ok(pts),
                    Err(e @ Error::NonGenericChain { .. }) => Err(e.to_string()),
                    Err(e) => return Err(e),
                };
                let mut max_res: f64 = 0.0;
                for q in &chain.points {
                    max_res = max_res.max(lambda_along_curve(&p, *q)?.residual);
                }
                let irregular = chain
                    .points
                    .iter()
                    .copied()
                    .filter(|q| !check_regularity(&p, *q, tol))
                    .collect();
                out.push(SmoothChainReport {
                    chain,
                    points,
                    irregular,
                    max_lambda_residual: max_res,
                });
            }
            let r = SmoothReport {
                pair,
                grid: grid as usize,
                trace_tol: tol,
                chains: out,
            };
            write_file(&report, &write_smooth_report(&r))?;
            let mut failed = false;
            for (k, c) in r.chains.iter().enumerate() {
                match &c.points {
                    Ok(pts) => {
                        for s in pts
                            .iter()
                            .filter(|s| s.kind == SmoothKind::SwallowtailCandidate)
                        {
                            println!(
                                "chain {k}: swallowtail candidate at ({:.6}, {:.6})",
                                s.u, s.v
                            );
                        }
                    }
                    Err(msg) => {
                        failed = true;
                        println!("chain {k}: {msg}");
                    }
                }
            }
            println!("{} chains", r.chains.len());
            Ok(i32::from(failed))
        }
    }
}
