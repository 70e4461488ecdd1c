//! `levelgraph` command line driver. Reports go to stdout as JSON, logs and
//! error messages to stderr.
//!
//! Exit codes: 0 success, 2 a verification verdict of "no", 3 a resource
//! limit, 4 an input error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use levelgraph::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Verify,
    Euler,
    Curvature,
    Refine,
    Levelset,
    Simultaneous,
    Sard,
    Lagrange,
    Variety,
    Spectrum,
    Nodal,
    GroundState,
    Export,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Off,
    Obj,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "levelgraph", version, about = "Level surfaces, indices and spectra of finite simple graphs")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,

    /// Graph document (JSON) or catalog name such as `icosahedron`,
    /// `cross-polytope:4`, `wheel:7`, `kuhn:4x4x4:periodic`,
    /// `random-sphere:SEED:REFINEMENTS`.
    #[arg(long)]
    pub graph: Option<String>,

    /// Function name from the document, an inline comma list of values, or
    /// `random` for a seeded injective function. Repeatable, order matters.
    #[arg(long = "function")]
    pub functions: Vec<String>,

    /// Level as `p/q`, integer or decimal. Repeatable, one per function.
    #[arg(long = "level", allow_hyphen_values = true)]
    pub levels: Vec<String>,

    #[arg(long)]
    pub dim: Option<i64>,

    /// Seed for `random` functions, Monte Carlo sampling and nodal perturbation.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Verification budget; falls back to SARD_BUDGET, then the library default.
    #[arg(long, env = "SARD_BUDGET")]
    pub budget: Option<u64>,

    /// Jacobi convergence tolerance.
    #[arg(long)]
    pub tol: Option<f64>,

    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,

    /// Wrap the variety grid into a torus.
    #[arg(long)]
    pub periodic: bool,

    #[arg(long)]
    pub step: Option<String>,

    /// Box as `a,b;a,b;...` (or `a,b^d`).
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,

    /// Polynomial constraint, e.g. `x^2+y^2-2`. Repeatable.
    #[arg(long = "poly", allow_hyphen_values = true)]
    pub polys: Vec<String>,

    /// Eigenvector index for `nodal` (1 is the constant vector).
    #[arg(long, default_value_t = 2)]
    pub k: usize,

    /// Monte Carlo samples for `curvature --vertex`.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,

    /// Vertex for per-vertex reports.
    #[arg(long)]
    pub vertex: Option<u32>,

    /// Keep exact levels in `variety`; the default nudges a level off 0 by
    /// multiples of 2^-64 when a grid value hits it.
    #[arg(long)]
    pub exact: bool,
}

/// Outcome of a subcommand before it becomes an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerdictNo,
    ResourceLimit,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::VerdictNo => 2,
            Status::ResourceLimit => 3,
        }
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::ConvergenceFailure { .. } => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 4 } else { 0 });
        }
    };
    let start = std::time::Instant::now();
    match commands::run(&args) {
        Ok((report, status)) => {
            let doc = serde_json::json!({
                "command": args.command.to_possible_value().map(|v| v.get_name().to_string()),
                "report": report,
                "timings": { "total_ms": start.elapsed().as_secs_f64() * 1e3 },
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
            if status != Status::Ok {
                eprintln!("levelgraph: verification verdict {status:?}");
            }
            ExitCode::from(status.code())
        }
        Err(e) => {
            eprintln!("levelgraph: {e}");
            let doc = serde_json::json!({
                "command": args.command.to_possible_value().map(|v| v.get_name().to_string()),
                "error": e.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("reports serialize"));
            ExitCode::from(error_code(&e))
        }
    }
}
