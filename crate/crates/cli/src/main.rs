//! `gcs`: analyze, classify, solve, generate and render constraint graphs.
//!
//! Exit codes: 0 success, 1 input or system error, 2 negative verdict.
//! Results go to stdout; diagnostics go to stderr.

mod render;

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gcs_core::decomp::{decompose, extract_plan, DecompError, ReducibilityClass};
use gcs_core::exec::{enumerate_with, execute_with, verify, ExecConfig, ExecError, Solution, TOL};
use gcs_core::graph::{parse, serialize, ConstraintGraph};
use gcs_core::henneberg::{fixture, random_laman};
use gcs_core::rigidity::diagnose_pebble;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gcs", version, about = "2D geometric constraint graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural diagnosis: well, under or over constrained.
    Analyze {
        /// Graph file, or `-` for stdin.
        path: String,
    },
    /// Bottom-up decomposition into rigid clusters.
    Classify { path: String },
    /// Build a construction plan and execute it.
    Solve {
        path: String,
        /// Root index per decision point, e.g. `0,1,0`.
        #[arg(long, value_delimiter = ',', conflicts_with = "all")]
        branch: Vec<usize>,
        /// Enumerate every branch combination (up to --limit).
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 16)]
        limit: usize,
        /// Residual tolerance; defaults to $GCS_TOL or 1e-9.
        #[arg(long)]
        tol: Option<f64>,
        /// Include the construction plan in the output.
        #[arg(long)]
        emit_plan: bool,
    },
    /// Random minimally rigid graph built by Henneberg steps.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Probability of a degree-3 step.
        #[arg(long, default_value_t = 0.5)]
        p_h2: f64,
    },
    /// Print a named fixture graph.
    Fixture { name: String },
    /// Draw a graph as DOT, or a solved graph as SVG.
    Render {
        path: String,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Solution file (required for SVG).
        #[arg(long)]
        solution: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Svg,
}

/// What a command prints and how it exits.
struct Outcome {
    stdout: String,
    code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0 }
    }

    fn verdict(stdout: String, positive: bool) -> Self {
        Outcome {
            stdout,
            code: if positive { 0 } else { 2 },
        }
    }
}

/// Input or system failure; exits 1.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout(), "{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Analyze { path } => {
            let g = load_graph(&path)?;
            let d = diagnose_pebble(&g)?;
            Ok(Outcome::verdict(serde_json::to_string(&d)?, d.is_well()))
        }
        Command::Classify { path } => {
            let g = load_graph(&path)?;
            let r = decompose(&g)?;
            let mut out = serde_json::to_value(r.class)?;
            out["clusters"] = serde_json::to_value(&r.final_clusters)?;
            out["merge_log"] = serde_json::to_value(&r.merge_log)?;
            let fully = r.class == ReducibilityClass::FullyReducible;
            Ok(Outcome::verdict(out.to_string(), fully))
        }
        Command::Solve {
            path,
            branch,
            all,
            limit,
            tol,
            emit_plan,
        } => {
            let g = load_graph(&path)?;
            let cfg = ExecConfig {
                tol: tolerance(tol)?,
                ..ExecConfig::default()
            };
            if limit == 0 {
                return Err(Failure("--limit must be at least 1".into()));
            }
            solve(&g, &branch, all, limit, &cfg, emit_plan)
        }
        Command::Generate { n, seed, p_h2 } => {
            Ok(Outcome::ok(serialize(&random_laman(n, seed, p_h2)?)))
        }
        Command::Fixture { name } => Ok(Outcome::ok(serialize(&fixture(&name)?))),
        Command::Render {
            path,
            format,
            solution,
            tol,
        } => {
            let g = load_graph(&path)?;
            match format {
                Format::Dot => Ok(Outcome::ok(render::dot(&g))),
                Format::Svg => {
                    let Some(sol_path) = solution else {
                        return Err(Failure("SVG output needs --solution".into()));
                    };
                    let s = load_solution(&sol_path)?;
                    let tol = tolerance(tol)?;
                    let report = verify(&g, &s, tol).map_err(|e| Failure(e.to_string()));
                    match report {
                        Ok(r) if r.pass => Ok(Outcome::ok(render::svg(&g, &s))),
                        Ok(r) => {
                            eprintln!(
                                "solution misses the constraints by {:e} (tol {tol:e})",
                                r.max_abs
                            );
                            Ok(Outcome::verdict(
                                json!({"reason": "not_verifying", "max_abs": r.max_abs})
                                    .to_string(),
                                false,
                            ))
                        }
                        Err(_) => {
                            let reason = json!({"reason": "missing_placement"});
                            Ok(Outcome::verdict(reason.to_string(), false))
                        }
                    }
                }
            }
        }
    }
}

fn solve(
    g: &ConstraintGraph,
    branch: &[usize],
    all: bool,
    limit: usize,
    cfg: &ExecConfig,
    emit_plan: bool,
) -> Result<Outcome, Failure> {
    let plan = match extract_plan(g) {
        Ok(p) => p,
        Err(DecompError::Graph(e)) => return Err(e.into()),
        Err(e) => {
            let reason = match e {
                DecompError::NotReducible(_) => "not_reducible",
                DecompError::NotWellConstrained(_) => "not_well_constrained",
                _ => "unsupported_step",
            };
            return Ok(refusal(reason, &e.to_string()));
        }
    };
    let solutions: Result<Vec<Solution>, ExecError> = if all {
        enumerate_with(&plan, g, limit, cfg).map(|v| v.into_iter().map(|(_, s)| s).collect())
    } else {
        execute_with(&plan, g, branch, cfg).map(|s| vec![s])
    };
    match solutions {
        Ok(list) => {
            let mut out = json!({ "solutions": list });
            if emit_plan {
                out["plan"] = serde_json::to_value(&plan)?;
            }
            Ok(Outcome::ok(out.to_string()))
        }
        Err(e @ ExecError::BadBranch { .. }) => Err(e.into()),
        Err(e) => Ok(refusal(e.reason(), &e.to_string())),
    }
}

fn refusal(reason: &str, message: &str) -> Outcome {
    eprintln!("{message}");
    Outcome::verdict(
        json!({ "reason": reason, "message": message }).to_string(),
        false,
    )
}

fn tolerance(flag: Option<f64>) -> Result<f64, Failure> {
    let tol = match (flag, std::env::var("GCS_TOL")) {
        (Some(t), _) => t,
        (None, Ok(v)) => v
            .trim()
            .parse()
            .map_err(|_| Failure(format!("bad GCS_TOL value '{v}'")))?,
        (None, Err(_)) => TOL,
    };
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(Failure(format!("tolerance must be positive, got {tol}")))
    }
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure(format!("{path}: {e}")))
    }
}

fn load_graph(path: &str) -> Result<ConstraintGraph, Failure> {
    Ok(parse(&read_input(path)?)?)
}

/// Accepts a bare solution object or `solve` output (first solution).
fn load_solution(path: &str) -> Result<Solution, Failure> {
    let v: Value = serde_json::from_str(&read_input(path)?)?;
    let v = match v.get("solutions") {
        Some(list) => list
            .get(0)
            .cloned()
            .ok_or_else(|| Failure("no solutions in file".into()))?,
        None => v,
    };
    Ok(serde_json::from_value(v)?)
}
