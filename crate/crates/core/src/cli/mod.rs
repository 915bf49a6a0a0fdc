//! Command-line front end: point and norm file input, one subcommand per
//! algorithm, JSON or text reports and SVG figures.
//!
//! Exit codes: 0 success, 1 infeasible or absent result, 2 input error,
//! 3 a `--verify` check failed.

mod commands;
pub mod io;
pub mod scenes;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::clustering::{Combiner, Measure};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "normclust", version, about = "Clustering and ball hulls in normed planes")]
pub struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// euclidean, l1, linf, two_arc, or a JSON descriptor file
    #[arg(long, global = true, default_value = "euclidean")]
    norm: String,
    /// CSV file of x,y rows; random points are drawn when omitted
    #[arg(long, global = true)]
    points: Option<PathBuf>,
    /// Seed for random points and the 3-clustering basis rotation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random points when --points is omitted
    #[arg(long, global = true, default_value_t = 12)]
    n: usize,
    /// Geometric tolerance of the norm
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Print the report as JSON
    #[arg(long, global = true)]
    json: bool,
    /// Recheck the reported measures against the library
    #[arg(long, global = true)]
    verify: bool,
    /// Include wall time in the report (breaks byte-identical output)
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CombinerArg {
    Max,
    Sum,
    SumSquares,
}

impl From<CombinerArg> for Combiner {
    fn from(c: CombinerArg) -> Self {
        match c {
            CombinerArg::Max => Combiner::Max,
            CombinerArg::Sum => Combiner::Sum,
            CombinerArg::SumSquares => Combiner::SumSquares,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MeasureArg {
    Diameter,
    Radius,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Diameter => Measure::Diameter,
            MeasureArg::Radius => Measure::Radius,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Diameter of the point set
    Diameter,
    /// Split two clusters by a line without increasing either diameter
    Separate {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Min-max diameter 2-clustering
    Cluster2,
    /// 2-clustering with diameter bounds d1 >= d2
    Cluster2c {
        #[arg(long)]
        d1: f64,
        #[arg(long)]
        d2: f64,
    },
    /// 3-clustering: feasibility for --d, otherwise the min-max value
    Cluster3 {
        #[arg(long)]
        d: Option<f64>,
    },
    /// k-clustering for a monotone objective
    Clusterk {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "max")]
        objective: CombinerArg,
        #[arg(long, value_enum, default_value = "diameter")]
        measure: MeasureArg,
    },
    /// Ball hull of radius d, with optional deletions and a far-point query
    Ballhull {
        #[arg(long)]
        d: f64,
        /// x,y of the query point
        #[arg(long, allow_hyphen_values = true)]
        query: Option<String>,
        /// Index of a point to delete before querying (repeatable)
        #[arg(long)]
        delete: Vec<usize>,
    },
    /// Minimal enclosing ball
    Mineball,
    /// Write an SVG figure
    Plot {
        #[arg(long)]
        out: PathBuf,
        /// First cluster of a separation scene
        #[arg(long, requires = "b")]
        a: Option<PathBuf>,
        #[arg(long, requires = "a")]
        b: Option<PathBuf>,
        /// Draw the ball hull of this radius
        #[arg(long)]
        d: Option<f64>,
        /// Draw the four-point lens configuration with its two spheres
        #[arg(long)]
        lens_counterexample: bool,
    },
}

/// Ways a subcommand can fail to produce a result.
#[derive(Debug)]
enum Failure {
    Input(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A finished subcommand.
struct Outcome {
    algorithm: &'static str,
    parameters: Value,
    result: Value,
    /// Human-readable lines for the non-JSON output.
    text: Vec<String>,
    /// False when the answer is "infeasible" or "absent".
    found: bool,
    checks: Vec<(&'static str, bool)>,
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let started = Instant::now();
    let outcome = match commands::execute(&cli.common, &cli.command) {
        Ok(o) => o,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    };
    let elapsed = started.elapsed().as_secs_f64();
    let verified = outcome.checks.iter().all(|c| c.1);

    if cli.common.json {
        let mut top = Map::new();
        top.insert("schema".into(), json!(SCHEMA));
        top.insert("algorithm".into(), json!(outcome.algorithm));
        top.insert("norm".into(), commands::norm_value(&cli.common));
        top.insert("parameters".into(), outcome.parameters);
        top.insert("feasible".into(), json!(outcome.found));
        top.insert("result".into(), outcome.result);
        if cli.common.verify {
            let checks: Map<String, Value> =
                outcome.checks.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            top.insert("verification".into(), json!({ "passed": verified, "checks": checks }));
        }
        if cli.common.timing {
            top.insert("wall_time_s".into(), json!(elapsed));
        }
        let text = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
        let _ = writeln!(out, "{text}");
    } else {
        for line in &outcome.text {
            let _ = writeln!(out, "{line}");
        }
        if !outcome.found {
            let _ = writeln!(out, "infeasible");
        }
        if cli.common.verify {
            for (name, ok) in &outcome.checks {
                let _ = writeln!(out, "verify {name}: {}", if *ok { "ok" } else { "FAILED" });
            }
        }
        if cli.common.timing {
            let _ = writeln!(out, "wall time: {elapsed:.3} s");
        }
    }
    if cli.common.verify && !verified {
        let _ = writeln!(err, "error: verification failed");
        return 3;
    }
    if outcome.found {
        0
    } else {
        1
    }
}
