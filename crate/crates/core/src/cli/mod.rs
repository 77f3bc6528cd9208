//! Command-line front end.
//!
//! Reports go to stdout as JSON, a short human summary goes to stderr.
//! Exit codes: 0 success, 2 input or usage error, 3 domain error (singular
//! or exterior point), 4 oracle-check failure.

pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::area::{area_objective, solve_area};
use crate::boundary::{boundary_objective, solve_boundary, DensityMode, SolveReport, SolveSettings};
use crate::check::{closed_form_checks, coefficient_gate, CheckLine, GateOutcome};
use crate::error::Error;
use crate::geom::{Containment, ConvexPolygon, Point};
use crate::kmedians::{solve_kmedians, KMediansSettings};
use crate::oracle::RngSeed;

pub use report::{PolygonDocument, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fermat-weber", version, about = "Continuous Fermat-Weber objectives and solvers for convex polygons")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an objective at a point.
    Eval {
        path: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, value_enum, default_value_t = Model::BoundaryArclength)]
        model: Model,
        /// Divide the area objective by the polygon area.
        #[arg(long)]
        normalize: bool,
    },
    /// Minimize an objective over the polygon.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Model::BoundaryArclength)]
        model: Model,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        start: Option<Point>,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long)]
        svg_out: Option<PathBuf>,
    },
    /// Voronoi k-medians heuristic on the area objective.
    Kmedians {
        path: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long)]
        svg_out: Option<PathBuf>,
    },
    /// Compare closed forms with brute-force oracles and adjudicate the
    /// area coefficient.
    OracleCheck {
        path: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Option<Point>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative tolerance for kernel-versus-quadrature checks.
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
    },
}

#[derive(Debug, Clone, Copy, Default, Args)]
pub struct Tolerances {
    #[arg(long)]
    pub step_tol: Option<f64>,
    #[arg(long)]
    pub grad_tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    BoundaryArclength,
    BoundaryEdges,
    Area,
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected X,Y, got {s:?}"))?;
    let parse = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("bad coordinate {v:?}: {e}"));
    Point::try_new(parse(x)?, parse(y)?).ok_or_else(|| "coordinates must be finite".to_string())
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularPoint(_) | Error::ExteriorPoint(_) | Error::StartNotInterior(_) => EXIT_DOMAIN,
            Error::Cell { ref source, .. } if matches!(**source, Error::SingularPoint(_) | Error::ExteriorPoint(_)) => {
                EXIT_DOMAIN
            }
            Error::DescentViolated { .. } => EXIT_ORACLE,
            _ => EXIT_USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

struct Loaded {
    poly: ConvexPolygon,
    name: Option<String>,
    digest: String,
    path: String,
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::usage("polygon file is not UTF-8"))?;
    let doc = PolygonDocument::parse(text).map_err(CliError::usage)?;
    let poly = doc.to_polygon().map_err(CliError::usage)?;
    Ok(Loaded { poly, name: doc.name, digest: report::sha256_hex(&bytes), path: path.display().to_string() })
}

fn settings_for(poly: &ConvexPolygon, tol: &Tolerances) -> Result<SolveSettings, CliError> {
    let base = SolveSettings::for_polygon(poly);
    let s = SolveSettings {
        step_tol: tol.step_tol.unwrap_or(base.step_tol),
        grad_tol: tol.grad_tol.unwrap_or(base.grad_tol),
        max_iters: tol.max_iters.unwrap_or(base.max_iters),
        record_trail: true,
    };
    s.validate()?;
    Ok(s)
}

fn xy(p: Point) -> [f64; 2] {
    [p.x, p.y]
}

fn write_svg(path: &Path, body: String) -> Result<(), CliError> {
    std::fs::write(path, body).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

struct Outcome {
    settings: serde_json::Value,
    results: serde_json::Value,
    summary: String,
    code: i32,
}

#[derive(Serialize)]
struct SolveResults<'a> {
    model: Model,
    minimizer: [f64; 2],
    objective: f64,
    iterations: usize,
    termination: crate::boundary::Termination,
    rate_estimate: Option<f64>,
    start_below_boundary_min: Option<bool>,
    trail: Vec<[f64; 2]>,
    objectives: &'a [f64],
}

fn solve_results(model: Model, r: &SolveReport) -> serde_json::Value {
    serde_json::to_value(SolveResults {
        model,
        minimizer: xy(r.minimizer),
        objective: r.objective,
        iterations: r.iterations,
        termination: r.termination,
        rate_estimate: r.rate_estimate,
        start_below_boundary_min: r.start_below_boundary_min,
        trail: r.iterates.iter().copied().map(xy).collect(),
        objectives: &r.objectives,
    })
    .expect("serializable")
}

fn run_command(command: &Command, input: &Loaded) -> Result<Outcome, CliError> {
    let poly = &input.poly;
    match command {
        Command::Eval { point, model, normalize, .. } => {
            let value = match model {
                Model::BoundaryArclength => boundary_objective(poly, *point, DensityMode::UniformArcLength),
                Model::BoundaryEdges => boundary_objective(poly, *point, DensityMode::PerEdgeEqual),
                Model::Area => area_objective(poly, *point, *normalize)?,
            };
            Ok(Outcome {
                settings: json!({ "model": model, "point": xy(*point), "normalize": normalize }),
                results: json!({ "objective": value, "containment": poly.contains(*point) }),
                summary: format!("objective {value:.6}"),
                code: EXIT_OK,
            })
        }
        Command::Solve { model, start, tol, svg_out, .. } => {
            let settings = settings_for(poly, tol)?;
            let report = match model {
                Model::BoundaryArclength => solve_boundary(poly, *start, DensityMode::UniformArcLength, &settings)?,
                Model::BoundaryEdges => solve_boundary(poly, *start, DensityMode::PerEdgeEqual, &settings)?,
                Model::Area => solve_area(poly, *start, &settings)?,
            };
            if let Some(path) = svg_out {
                let mut fig = svg::Figure::new(poly);
                fig.trail(&report.iterates);
                fig.marker(report.minimizer, "minimizer");
                write_svg(path, fig.render())?;
            }
            Ok(Outcome {
                settings: json!({ "model": model, "start": start.map(xy), "solver": settings }),
                summary: format!(
                    "minimizer ({:.9}, {:.9}) objective {:.9} after {} iterations ({:?})",
                    report.minimizer.x, report.minimizer.y, report.objective, report.iterations, report.termination
                ),
                results: solve_results(*model, &report),
                code: EXIT_OK,
            })
        }
        Command::Kmedians { k, seed, tol, svg_out, .. } => {
            if *k == 0 {
                return Err(CliError::usage("k must be at least 1"));
            }
            let mut settings = KMediansSettings::for_polygon(poly);
            if let Some(v) = tol.step_tol {
                settings.site_tol = v;
            }
            if let Some(v) = tol.max_iters {
                settings.max_rounds = v;
            }
            if let Some(v) = tol.grad_tol {
                settings.cell.grad_tol = v;
            }
            if !(settings.site_tol > 0.0) || settings.max_rounds == 0 {
                return Err(CliError::usage("tolerances must be positive and max-iters at least 1"));
            }
            settings.cell.validate()?;
            let run = solve_kmedians(poly, *k, RngSeed(*seed), &settings)?;
            let state = &run.state;
            let cells: Vec<_> = state
                .cells
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    json!({
                        "site": xy(state.sites[i]),
                        "vertices": c.as_ref().map(|c| c.vertices().iter().copied().map(xy).collect::<Vec<_>>()),
                        "area": c.as_ref().map_or(0.0, ConvexPolygon::signed_area),
                        "objective": state.cell_objectives[i],
                        "frozen": state.frozen[i],
                    })
                })
                .collect();
            if let Some(path) = svg_out {
                let mut fig = svg::Figure::new(poly);
                for (i, c) in state.cells.iter().enumerate() {
                    if let Some(c) = c {
                        fig.cell(i, c);
                    }
                }
                for &s in &state.sites {
                    fig.marker(s, "site");
                }
                write_svg(path, fig.render())?;
            }
            Ok(Outcome {
                settings: json!({ "k": k, "seed": seed, "kmedians": settings }),
                results: json!({
                    "sites": state.sites.iter().copied().map(xy).collect::<Vec<_>>(),
                    "cells": cells,
                    "total_objective": state.total_objective,
                    "rounds": state.iteration,
                    "converged": run.converged,
                    "objective_trail": run.objective_trail,
                }),
                summary: format!(
                    "k={k}: total objective {:.9} after {} rounds{}",
                    state.total_objective,
                    state.iteration,
                    if run.converged { "" } else { " (not converged)" }
                ),
                code: EXIT_OK,
            })
        }
        Command::OracleCheck { point, samples, seed, rel_tol, .. } => {
            if !(*rel_tol >= 0.0) {
                return Err(CliError::usage("rel-tol must be nonnegative"));
            }
            let x = point.unwrap_or_else(|| poly.vertex_centroid());
            if poly.contains(x) != Containment::Interior {
                return Err(Error::SingularPoint(x).into());
            }
            let checks: Vec<CheckLine> = closed_form_checks(poly, x, *rel_tol)?;
            let gate: GateOutcome = coefficient_gate(poly, x, *samples, RngSeed(*seed))?;
            let checks_ok = checks.iter().all(|c| c.passed);
            let passed = checks_ok && gate.confirms_shipped();
            let mut summary = String::new();
            for c in &checks {
                summary += &format!(
                    "{:<28} closed {:.12} oracle {:.12} rel {:.2e} {}\n",
                    c.name,
                    c.closed_form,
                    c.oracle,
                    c.rel_error,
                    if c.passed { "ok" } else { "FAIL" }
                );
            }
            for c in &gate.candidates {
                summary += &format!(
                    "coefficient {:<4} predicts {:.6} vs Monte Carlo {:.6}: z = {} {}\n",
                    c.label,
                    c.predicted,
                    gate.mc_mean,
                    c.z_score.map_or("n/a".to_string(), |z| format!("{z:.2}")),
                    if c.consistent { "consistent" } else { "rejected" }
                );
            }
            summary += &format!(
                "gate: {:?}{}",
                gate.status,
                gate.selected.map_or(String::new(), |s| format!(", selected {}", s.label()))
            );
            Ok(Outcome {
                settings: json!({ "point": xy(x), "samples": samples, "seed": seed, "rel_tol": rel_tol }),
                results: json!({
                    "checks": checks,
                    "coefficient_gate": gate,
                    "status": if passed { "passed" } else if gate.status == crate::check::GateStatus::Inconclusive { "inconclusive" } else { "failed" },
                }),
                summary,
                code: if passed { EXIT_OK } else { EXIT_ORACLE },
            })
        }
    }
}

fn command_path(command: &Command) -> &Path {
    match command {
        Command::Eval { path, .. }
        | Command::Solve { path, .. }
        | Command::Kmedians { path, .. }
        | Command::OracleCheck { path, .. } => path,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let started = Instant::now();
    let outcome = load(command_path(&cli.command)).and_then(|input| {
        let outcome = run_command(&cli.command, &input)?;
        Ok((input, outcome))
    });
    match outcome {
        Ok((input, outcome)) => {
            let report = RunReport {
                command: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
                input: report::InputInfo {
                    path: input.path,
                    sha256: input.digest,
                    polygon: PolygonDocument::from_polygon(&input.poly, input.name),
                },
                settings: outcome.settings,
                results: outcome.results,
                versions: report::Versions::default(),
                timing: report::Timing { elapsed_ms: started.elapsed().as_secs_f64() * 1e3 },
            };
            let _ = writeln!(out, "{}", report.to_json());
            let _ = writeln!(err, "{}", outcome.summary.trim_end());
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
