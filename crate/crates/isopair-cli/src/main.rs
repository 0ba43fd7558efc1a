//! `isopair` — build pairs of invertible matrices with prescribed
//! eigenvalues from weighted honeycomb networks, and verify the spectral
//! identities behind the construction.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input or
//! parse error, 3 a mathematical precondition was violated.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use isopair::facecoords::{
    connection_from_face_weights, dimension, psi, solve_face_weights, EigenData, FaceError,
    FreeBlock,
};
use isopair::polygon::{polygon_for, PolygonError};
use isopair::report::Report;
use isopair::ribbon::RibbonGraph;
use isopair::surfaces::{
    build_surface_gn, build_triangulation, dual_ribbon, eigenvalue_exponent_matrix,
    verify_independence, SurfaceError,
};
use isopair::transfer::verify_theorem1;
use isopair_cli::sampling::Mode;
use isopair_cli::suites::{self, SuiteConfig};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "isopair",
    version,
    about = "Pairs of invertible matrices with prescribed spectra, via weighted networks on surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Exact rational arithmetic.
    Exact,
    /// Complex floating point with a comparison tolerance.
    Float,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Float => Mode::Float,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphArg {
    /// The bipartite network of n-cells over the triangulated surface.
    #[value(alias = "Gn")]
    Gn,
    /// The dual ribbon graph of the triangulation.
    Dual,
    /// The conjugated dual (shaded triangles glued with reversed order).
    Conjugate,
}

#[derive(Subcommand)]
enum Command {
    /// Build a matrix pair from prescribed eigenvalue data.
    Pair {
        /// JSON file with alpha, beta, gamma lists (rationals as strings).
        eigen: PathBuf,
        /// Optional free-parameter block file; defaults to the all-ones block.
        free: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Comparison tolerance (float mode only).
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the JSON result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded verification suites and print a JSON report.
    Verify {
        /// RNG seed; falls back to ISOPAIR_SEED, then to 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest cell size exercised.
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Trials per cell size.
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Comparison tolerance (float mode only).
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Deliberately negate the path-sum sign convention; the oracle
        /// suite must then fail with a witness (self-test).
        #[arg(long)]
        corrupt_sign_convention: bool,
    },
    /// Count the free parameters of pairs with prescribed eigenvalues on a
    /// genus-g surface with k punctures.
    Dim {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Exponent matrix of the eigenvalue map with rank and independence
    /// checks.
    Rank {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Convex lattice polygon with g interior and k boundary points.
    Polygon {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
    },
    /// Mirror-symmetric triangulation of the genus-g, k-punctured surface.
    Triangulate {
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
    },
    /// Export a graph as JSON or DOT (edges colored by zig-zag path).
    Export {
        #[arg(long, value_enum)]
        graph: GraphArg,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        k: usize,
        /// Cell size (Gn only).
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failures that terminate the run, split by exit code.
enum Failure {
    /// Unreadable or malformed input: exit 2.
    Parse(String),
    /// Input parsed but violates a mathematical precondition: exit 3.
    Precondition(String),
}

fn face_failure(e: FaceError) -> Failure {
    match e {
        FaceError::Parse(_)
        | FaceError::BadEigenShape
        | FaceError::BadBlockShape { .. }
        | FaceError::BadGridShape(_) => Failure::Parse(e.to_string()),
        _ => Failure::Precondition(e.to_string()),
    }
}

fn surface_failure(e: SurfaceError) -> Failure {
    match e {
        SurfaceError::Parse(_) => Failure::Parse(e.to_string()),
        _ => Failure::Precondition(e.to_string()),
    }
}

fn polygon_failure(e: PolygonError) -> Failure {
    match e {
        PolygonError::Parse(_) => Failure::Parse(e.to_string()),
        _ => Failure::Precondition(e.to_string()),
    }
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Parse(format!("cannot read {}: {}", path.display(), e)))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Parse(format!("{} is not valid JSON: {}", path.display(), e)))
}

fn pretty(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("JSON value serializes");
    text.push('\n');
    text
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Parse(format!("cannot write {}: {}", path.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn cmd_pair(
    eigen: PathBuf,
    free: Option<PathBuf>,
    mode: Mode,
    tol: f64,
    out: Option<PathBuf>,
) -> Result<bool, Failure> {
    let e = EigenData::from_json(&read_json(&eigen)?).map_err(face_failure)?;
    let y = match free {
        Some(path) => FreeBlock::from_json(&read_json(&path)?).map_err(face_failure)?,
        None => FreeBlock::unit(e.n),
    };
    let (a, b) = psi(&e, &y).map_err(face_failure)?;

    let cfg = SuiteConfig {
        seed: 0,
        mode,
        n_max: e.n,
        trials: 1,
        tol,
    };
    let mut report = Report::new();
    for (id, ok, witness) in suites::spectra_claims(&e, &a, &b, &cfg) {
        report.push(
            &id,
            ok,
            format!("constructed pair of size {}", e.n),
            witness,
        );
    }

    let mut faces = Value::Null;
    if e.n >= 2 {
        let fc = solve_face_weights(&e, &y).map_err(face_failure)?;
        let (net, _) = connection_from_face_weights(&fc).map_err(face_failure)?;
        report.merge(verify_theorem1(&net, cfg.tol_opt()));
        faces = json!({
            "grid": fc
                .x
                .iter()
                .map(|row| row.iter().map(|s| s.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "x_x": fc.x_x.to_string(),
            "x_y": fc.x_y.to_string(),
        });
    }

    let ok = report.ok();
    let doc = json!({
        "n": e.n,
        "eigen": e.to_json(),
        "a": a.to_json(),
        "b": b.to_json(),
        "faces": faces,
        "report": report.to_json(),
    });
    emit(&out, &pretty(&doc))?;
    Ok(ok)
}

fn cmd_verify(
    seed: Option<u64>,
    n: usize,
    trials: usize,
    mode: Mode,
    tol: f64,
    out: Option<PathBuf>,
    corrupt_sign_convention: bool,
) -> Result<bool, Failure> {
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("ISOPAIR_SEED") {
            Ok(text) => text
                .trim()
                .parse::<u64>()
                .map_err(|e| Failure::Parse(format!("ISOPAIR_SEED: {}", e)))?,
            Err(std::env::VarError::NotPresent) => 0,
            Err(e) => return Err(Failure::Parse(format!("ISOPAIR_SEED: {}", e))),
        },
    };
    if n == 0 {
        return Err(Failure::Precondition("cell size must be positive".into()));
    }
    let cfg = SuiteConfig {
        seed,
        mode,
        n_max: n,
        trials,
        tol,
    };
    let (ok, value) = suites::verify_all(&cfg, corrupt_sign_convention);
    emit(&out, &pretty(&value))?;
    Ok(ok)
}

fn cmd_dim(g: usize, k: usize, n: usize) -> Result<bool, Failure> {
    let free = dimension(g, k, n).map_err(face_failure)?;
    println!("{}", free);
    Ok(true)
}

fn cmd_rank(g: usize, k: usize, n: usize) -> Result<bool, Failure> {
    let tri = build_triangulation(g, k).map_err(surface_failure)?;
    let gn = build_surface_gn(&tri, n).map_err(surface_failure)?;
    let em = eigenvalue_exponent_matrix(&gn).map_err(surface_failure)?;
    let report = verify_independence(&em);
    let doc = json!({
        "g": g,
        "k": k,
        "n": n,
        "rows": em.rows.rows,
        "columns": em.rows.cols,
        "rank": em.rows.rank(),
        "free": dimension(g, k, n).map_err(face_failure)?,
        "bands": em.bands.len(),
        "report": report.to_json(),
    });
    print!("{}", pretty(&doc));
    Ok(report.ok())
}

fn cmd_polygon(g: usize, k: usize) -> Result<bool, Failure> {
    let p = polygon_for(g, k).map_err(polygon_failure)?;
    print!("{}", pretty(&p.to_json()));
    Ok(true)
}

fn cmd_triangulate(g: usize, k: usize) -> Result<bool, Failure> {
    let tri = build_triangulation(g, k).map_err(surface_failure)?;
    print!("{}", pretty(&tri.to_json()));
    Ok(true)
}

fn cmd_export(
    which: GraphArg,
    g: usize,
    k: usize,
    n: usize,
    format: FormatArg,
    out: Option<PathBuf>,
) -> Result<bool, Failure> {
    let tri = build_triangulation(g, k).map_err(surface_failure)?;
    let graph: RibbonGraph = match which {
        GraphArg::Gn => build_surface_gn(&tri, n).map_err(surface_failure)?.graph,
        GraphArg::Dual => dual_ribbon(&tri, false).map_err(surface_failure)?,
        GraphArg::Conjugate => dual_ribbon(&tri, true).map_err(surface_failure)?,
    };
    let text = match format {
        FormatArg::Json => pretty(&graph.to_json()),
        FormatArg::Dot => graph.to_dot(),
    };
    emit(&out, &text)?;
    Ok(true)
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Pair {
            eigen,
            free,
            mode,
            tol,
            out,
        } => cmd_pair(eigen, free, mode.into(), tol, out),
        Command::Verify {
            seed,
            n,
            trials,
            mode,
            tol,
            out,
            corrupt_sign_convention,
        } => cmd_verify(seed, n, trials, mode.into(), tol, out, corrupt_sign_convention),
        Command::Dim { g, k, n } => cmd_dim(g, k, n),
        Command::Rank { g, k, n } => cmd_rank(g, k, n),
        Command::Polygon { g, k } => cmd_polygon(g, k),
        Command::Triangulate { g, k } => cmd_triangulate(g, k),
        Command::Export {
            graph,
            g,
            k,
            n,
            format,
            out,
        } => cmd_export(graph, g, k, n, format, out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(3)
        }
    }
}
