// SPDX-License-Identifier: Apache-2.0

//! `kpaths`: query path databases, generate benchmark graphs, run self-checks.

use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpaths::generate;
use kpaths::pathdb::PathDbError;
use kpaths::zbdd::NodeLimitExceeded;
use kpaths::{BuildOptions, Mode, NodeStore, PathDb, VarOrder};
use serde::Serialize;

const EXIT_INVALID: u8 = 2;
const EXIT_QUERY: u8 = 3;
const EXIT_NODE_LIMIT: u8 = 4;

#[derive(Parser)]
#[command(name = "kpaths", version, about = "k longest / k shortest paths without enumeration")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the path database of a graph and run a top-K query.
    Query(QueryArgs),
    /// Write a seeded benchmark graph to standard output.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Run the built-in golden checks.
    Selfcheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Longest,
    Shortest,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Longest => Mode::Longest,
            ModeArg::Shortest => Mode::Shortest,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Topo,
    Reverse,
}

#[derive(Args)]
struct QueryArgs {
    /// Edge-list file: one `from to weight` line per edge.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    k: u64,
    /// Report only a single k-th best path.
    #[arg(long)]
    kth: bool,
    /// Prune partial paths per vertex while building.
    #[arg(long)]
    prune: bool,
    /// Print only the number of paths in the database.
    #[arg(long)]
    count_only: bool,
    #[arg(long, default_value_t = 100)]
    enumerate_limit: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_enum, default_value_t = OrderArg::Topo)]
    var_order: OrderArg,
}

#[derive(Args)]
struct Weights {
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    wmin: i64,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    wmax: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum GenKind {
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edge_prob: f64,
        #[command(flatten)]
        weights: Weights,
    },
    Layered {
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        width: usize,
        #[command(flatten)]
        weights: Weights,
    },
}

#[derive(Serialize)]
struct JsonPath {
    length: String,
    vertices: Vec<String>,
}

#[derive(Serialize)]
struct Report {
    mode: &'static str,
    k: u64,
    kth: bool,
    threshold: Option<String>,
    count: String,
    total_paths: String,
    nodes: usize,
    iterations: usize,
    time_ms: f64,
    memory_note: String,
    paths: Vec<JsonPath>,
    truncated: bool,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn query_failure(e: PathDbError) -> Failure {
    let code = match e {
        PathDbError::InvalidOffset { .. } => EXIT_INVALID,
        _ => EXIT_QUERY,
    };
    fail(code, e.to_string())
}

fn memory_note() -> String {
    std::fs::read_to_string("/proc/self/status")
        .ok()
        .and_then(|s| {
            s.lines()
                .find(|l| l.starts_with("VmHWM:"))
                .map(|l| format!("peak RSS {}", l["VmHWM:".len()..].trim()))
        })
        .unwrap_or_else(|| "peak RSS unavailable".into())
}

fn node_store() -> Result<NodeStore, Failure> {
    match std::env::var("KPATHS_NODE_LIMIT") {
        Ok(v) => {
            let limit = v
                .trim()
                .parse()
                .map_err(|_| fail(EXIT_INVALID, format!("KPATHS_NODE_LIMIT is not a node count: {v:?}")))?;
            Ok(NodeStore::with_node_limit(limit))
        }
        Err(_) => Ok(NodeStore::new()),
    }
}

fn run_query(args: &QueryArgs) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| fail(EXIT_INVALID, format!("{}: {e}", args.input.display())))?;
    let dag = kpaths::parse(&text).map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    let mode = Mode::from(args.mode);
    if args.k == 0 && !args.count_only {
        return Err(query_failure(PathDbError::ZeroK));
    }
    let started = Instant::now();
    let mut store = node_store()?;
    let opts = BuildOptions {
        prune: args.prune.then_some((args.k, mode)),
        var_order: match args.var_order {
            OrderArg::Topo => VarOrder::Topo,
            OrderArg::Reverse => VarOrder::Reverse,
        },
        ..Default::default()
    };
    let db = PathDb::build(&mut store, &dag, &opts).map_err(query_failure)?;
    let total = db.count_paths(&mut store);
    if args.count_only {
        return Ok(format!("{total}\n"));
    }
    if db.expression().is_zero() {
        return Err(query_failure(PathDbError::EmptyDatabase));
    }
    let result = db.top_k(&mut store, args.k, mode).map_err(query_failure)?;
    let (paths, truncated) = if args.kth {
        let p = db.kth(&mut store, args.k, mode).map_err(query_failure)?;
        (vec![p], false)
    } else {
        let listed = db
            .materialize(&mut store, &result, args.enumerate_limit)
            .map_err(query_failure)?;
        let truncated = u64::try_from(&result.count).map_or(true, |c| (listed.len() as u64) < c);
        (listed, truncated)
    };
    let report = Report {
        mode: mode.as_str(),
        k: args.k,
        kth: args.kth,
        threshold: result.threshold.map(|t| t.to_string()),
        count: result.count.to_string(),
        total_paths: total.to_string(),
        nodes: store.node_count(),
        iterations: result.iterations,
        time_ms: started.elapsed().as_secs_f64() * 1e3,
        memory_note: memory_note(),
        paths: paths
            .iter()
            .map(|p| JsonPath {
                length: p.length.to_string(),
                vertices: db.names(p),
            })
            .collect(),
        truncated,
    };
    Ok(match args.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Tsv => render_tsv(&report),
    })
}

fn render_tsv(r: &Report) -> String {
    let mut out = String::new();
    let threshold = r.threshold.as_deref().unwrap_or("none");
    let _ = writeln!(out, "# mode\t{}", r.mode);
    let _ = writeln!(out, "# k\t{}", r.k);
    let _ = writeln!(out, "# threshold\t{threshold}");
    let _ = writeln!(out, "# count\t{}", r.count);
    let _ = writeln!(out, "# total_paths\t{}", r.total_paths);
    let _ = writeln!(out, "# nodes\t{}", r.nodes);
    let _ = writeln!(out, "# time_ms\t{:.3}", r.time_ms);
    let _ = writeln!(out, "# memory\t{}", r.memory_note);
    if r.truncated {
        let _ = writeln!(out, "# truncated\ttrue");
    }
    for p in &r.paths {
        let _ = writeln!(out, "{}\t{}", p.length, p.vertices.join("->"));
    }
    out
}

fn run_gen(kind: &GenKind) -> Result<String, Failure> {
    let dag = match kind {
        GenKind::Random {
            vertices,
            edge_prob,
            weights: w,
        } => generate::random(*vertices, *edge_prob, w.wmin, w.wmax, w.seed),
        GenKind::Layered {
            layers,
            width,
            weights: w,
        } => generate::layered(*layers, *width, w.wmin, w.wmax, w.seed),
    }
    .map_err(|e| fail(EXIT_INVALID, e.to_string()))?;
    Ok(dag.render())
}

fn run_selfcheck() -> Result<String, Failure> {
    let mut out = String::new();
    let mut failed = 0;
    for (section, checks) in kpaths::selfcheck::run() {
        for c in checks {
            let verdict = if c.passed() { "PASS" } else { "FAIL" };
            if !c.passed() {
                failed += 1;
            }
            let _ = writeln!(out, "{verdict}  {section}: {}  expected {}  got {}", c.name, c.expected, c.actual);
        }
    }
    if failed > 0 {
        print!("{out}");
        return Err(fail(1, format!("{failed} self-check(s) failed")));
    }
    let _ = writeln!(out, "all self-checks passed");
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let default_hook = panic::take_hook();
    panic::set_hook(Box::new(move |info| {
        if info.payload().downcast_ref::<NodeLimitExceeded>().is_none() {
            default_hook(info);
        }
    }));
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| match &cli.command {
        Command::Query(args) => run_query(args),
        Command::Gen { kind } => run_gen(kind),
        Command::Selfcheck => run_selfcheck(),
    }));
    let outcome = match outcome {
        Ok(r) => r,
        Err(payload) => match payload.downcast::<NodeLimitExceeded>() {
            Ok(e) => Err(fail(EXIT_NODE_LIMIT, format!("memory guard: {e}"))),
            Err(payload) => panic::resume_unwind(payload),
        },
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("kpaths: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
