//! Command line interface.
//!
//! Every subcommand prints one document to stdout (JSON by default,
//! `--format text` for a human summary, `bench` always CSV);
//! human-oriented progress goes to stderr through the logger. Exit
//! codes: 0 on success, 2 for input problems (unreadable or malformed
//! graphs, bad parameters), 3 when a run violates an algorithmic
//! contract (a sweep cut or qualifying rounding projection that
//! provably had to exist was not found, the Lanczos iteration failed to
//! converge, a selftest check failed, or a certificate handed to
//! `certify` does not verify). The JSON schema is versioned and stable;
//! the text rendering is not a stable surface.

use crate::driver::{balcut, decompose, BalCutOutcome, DriverError, RunConfig};
use crate::expsketch::SketchParams;
use crate::graph::Graph;
use crate::io::{parse_graph, read_graph, write_graph, GraphFormat, IoError};
use crate::oracle::OracleConfig;
use crate::reference;
use crate::rounding::RoundingConfig;
use crate::sdp::{verify_dual_feasibility, DualCheckOptions};
use crate::selftest::{all_passed, run_selftest};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(
    name = "balcut",
    version,
    about = "Balanced separators and expansion certificates for sparse weighted graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output rendering; JSON is the stable, versioned schema.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cap the worker pool used by sketching and rounding.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Run the multiplicative weights loop on a connected graph.
    #[command(visible_alias = "partition")]
    Run(RunArgs),
    /// Re-verify a certificate produced by an earlier run.
    Certify(CertifyArgs),
    /// Recursively partition a graph into certified pieces.
    Decompose(RunArgs),
    /// Write a generated graph in an accepted input format.
    Gen(GenArgs),
    /// Run the built-in sanity checks.
    Selftest,
    /// Print structural facts about a graph.
    Info(GraphArgs),
    /// Time runs over a list of graphs and emit CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Input graph path; `-` reads stdin.
    #[arg(long)]
    graph: String,
    #[arg(long, default_value = "edgelist", value_parser = GraphFormat::from_str)]
    graph_format: GraphFormat,
    /// Keep only the connected component of largest volume.
    #[arg(long)]
    largest_component: bool,
}

#[derive(Args)]
struct SolverArgs {
    /// Target conductance scale; certificates speak about 3*gamma/16.
    #[arg(long)]
    gamma: f64,
    /// Balance parameter in (0, 1/2].
    #[arg(long, visible_alias = "b", default_value_t = 0.5)]
    balance: f64,
    /// Multiplicative weights step size in (0, 1).
    #[arg(long, default_value_t = 1.0 / 130.0)]
    epsilon: f64,
    /// Iteration budget constant: ceil(t_constant * ln n / gamma).
    #[arg(long, default_value_t = 20.0)]
    t_constant: f64,
    /// Hard cap on the iteration budget.
    #[arg(long, visible_alias = "max-iter")]
    max_iterations: Option<usize>,
    /// Unsigned integer, or `random` for a fresh seed (the resolved
    /// value is echoed in the output, so any run can be replayed).
    #[arg(long, default_value = "0")]
    seed: String,
    /// Sketch distortion parameter in (0, 1); smaller is more accurate.
    #[arg(long, visible_alias = "sketch-delta", default_value_t = 0.25)]
    delta: f64,
    /// Leading constant of the sweep-case conductance threshold.
    #[arg(long, default_value_t = 2048.0)]
    sweep_constant: f64,
    /// Projection trials when rounding; ceil(4 log2 n) when unset.
    #[arg(long)]
    trials: Option<usize>,
    /// Rounding volume window fraction in (0, 1/2); balance/4 when unset.
    #[arg(long)]
    window: Option<f64>,
    /// Use the proof constants everywhere they differ from the practical
    /// defaults (epsilon 1/130, delta 1/512, t_constant 20, derived
    /// trials and window), overriding the individual flags. Proof-grade
    /// sketches are several million rows wide; expect tiny inputs only.
    #[arg(long)]
    paper_constants: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// JSON produced by `run` (or just its `outcome` object); `-` reads
    /// stdin.
    #[arg(long)]
    certificate: String,
    /// Level to verify at; defaults to the payload's gamma_certified.
    #[arg(long)]
    gamma_prime: Option<f64>,
    /// Balance parameter; defaults to the payload's config, then 1/2.
    #[arg(long, visible_alias = "b")]
    balance: Option<f64>,
    /// Eigenvalue tolerance, relative to the operator scale.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
struct BenchArgs {
    /// Graph file; repeat the flag to time several.
    #[arg(long, required = true)]
    graph: Vec<String>,
    #[arg(long, default_value = "edgelist", value_parser = GraphFormat::from_str)]
    graph_format: GraphFormat,
    #[command(flatten)]
    solver: SolverArgs,
    /// Runs per graph; the row reports the fastest.
    #[arg(long, default_value_t = 1)]
    repeat: usize,
}

impl SolverArgs {
    fn to_config(&self) -> Result<RunConfig, CliError> {
        let seed = match self.seed.as_str() {
            "random" => rand::random::<u64>(),
            s => s
                .parse::<u64>()
                .map_err(|_| CliError::Input(format!("seed must be an integer or `random`, got {s:?}")))?,
        };
        let mut cfg = RunConfig {
            gamma: self.gamma,
            balance: self.balance,
            epsilon: self.epsilon,
            t_constant: self.t_constant,
            max_iterations: self.max_iterations,
            seed,
            sketch: SketchParams {
                delta: self.delta,
                ..SketchParams::default()
            },
            oracle: OracleConfig {
                sweep_constant: self.sweep_constant,
            },
            rounding: RoundingConfig {
                trials: self.trials,
                window: self.window,
            },
        };
        if self.paper_constants {
            cfg.epsilon = 1.0 / 130.0;
            cfg.t_constant = 20.0;
            cfg.sketch.delta = 1.0 / 512.0;
            cfg.rounding = RoundingConfig::default();
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    family: Family,
    /// Output path; `-` writes the graph itself to stdout.
    #[arg(long, global = true, default_value = "-")]
    output: String,
    #[arg(long, global = true, default_value = "edgelist", value_parser = GraphFormat::from_str)]
    graph_format: GraphFormat,
}

#[derive(Subcommand)]
enum Family {
    /// Path on n vertices.
    Path {
        #[arg(long)]
        n: usize,
    },
    /// Cycle on n vertices.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Complete graph on n vertices.
    Complete {
        #[arg(long)]
        n: usize,
    },
    /// Two k-cliques joined by unit-weight bridge edges.
    Barbell {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        bridges: usize,
    },
    /// Two k-cliques joined by one weighted edge.
    Dumbbell {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        bridge_weight: f64,
    },
    /// A spine path with pendant legs on every spine vertex.
    Caterpillar {
        #[arg(long)]
        spine: usize,
        #[arg(long)]
        legs: usize,
    },
    /// Chain of cliques joined by single weighted bridges.
    CliqueChain {
        /// Comma-separated clique sizes, e.g. 60,5,5,5.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        widths: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        bridge_weight: f64,
    },
    /// Rows x cols lattice.
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Two dense halves with a sparse crossing; vertices 0..n/2 are the
    /// planted side.
    PlantedBisection {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p_in: f64,
        #[arg(long)]
        p_out: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random d-regular graph by repeated perfect-matching attempts.
    RandomRegular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// One head clique with weakly bridged tail cliques.
    PendantCliques {
        #[arg(long)]
        head: usize,
        #[arg(long)]
        tail: usize,
        #[arg(long)]
        tails: usize,
        #[arg(long, default_value_t = 1.0)]
        bridge_weight: f64,
    },
}

enum CliError {
    Input(String),
    Contract(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Contract(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Contract(m) => m,
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DriverError> for CliError {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::InvalidConfig(_)
            | DriverError::Disconnected
            | DriverError::NotApplicable => CliError::Input(e.to_string()),
            DriverError::Sketch(_)
            | DriverError::Oracle(_)
            | DriverError::Rounding(_)
            | DriverError::RecursionDepthExceeded(_) => CliError::Contract(e.to_string()),
        }
    }
}

/// Where and how a command's one output document goes.
struct Output {
    format: OutputFormat,
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, v: &serde_json::Value) -> Result<(), CliError> {
        let text = match self.format {
            OutputFormat::Json => {
                serde_json::to_string_pretty(v).expect("serializable") + "\n"
            }
            OutputFormat::Text => render_text(v),
        };
        self.write(&text)
    }

    fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            None => {
                print!("{text}");
                Ok(())
            }
            Some(path) => std::fs::write(path, text)
                .map_err(|e| CliError::Input(format!("writing {}: {e}", path.display()))),
        }
    }
}

/// Parses the process arguments, runs the command, and returns the exit
/// code. Parse failures exit directly (code 2, matching input errors).
pub fn run() -> i32 {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .expect("worker pool configured before first use");
    }
    let output = Output {
        format: cli.format,
        out: cli.out,
    };
    match dispatch(cli.command, &output) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command, output: &Output) -> Result<(), CliError> {
    match command {
        Command::Run(args) => cmd_run(args, output),
        Command::Certify(args) => cmd_certify(args, output),
        Command::Decompose(args) => cmd_decompose(args, output),
        Command::Gen(args) => cmd_gen(args, output),
        Command::Selftest => cmd_selftest(output),
        Command::Info(args) => cmd_info(args, output),
        Command::Bench(args) => cmd_bench(args, output),
    }
}

fn build_info() -> serde_json::Value {
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "git_hash": env!("BUILD_GIT_HASH"),
    })
}

fn read_text_input(path: &str, what: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        use std::io::Read;
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Input(format!("reading {what} from stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("reading {what} {path}: {e}")))
    }
}

fn load_graph(args: &GraphArgs) -> Result<(Graph, Option<Vec<u32>>), CliError> {
    let g = if args.graph == "-" {
        let text = read_text_input("-", "graph")?;
        parse_graph(&text, args.graph_format)?
    } else {
        read_graph(Path::new(&args.graph), args.graph_format)?
    };
    if !args.largest_component {
        return Ok((g, None));
    }
    let comps = g.connected_components();
    if comps.len() <= 1 {
        return Ok((g, None));
    }
    let largest = comps
        .into_iter()
        .max_by(|a, b| g.volume(a).total_cmp(&g.volume(b)))
        .expect("at least one component");
    let (sub, ids) = g.subgraph(&largest);
    Ok((sub, Some(ids)))
}

fn graph_info(args: &GraphArgs, g: &Graph, kept: &Option<Vec<u32>>) -> serde_json::Value {
    let mut v = json!({
        "path": args.graph,
        "format": args.graph_format,
        "n": g.n(),
        "m": g.m(),
        "total_volume": g.total_volume(),
    });
    if let Some(ids) = kept {
        // outcome vertex ids index into this list
        v["kept_vertex_ids"] = json!(ids);
    }
    v
}

fn cmd_run(args: RunArgs, output: &Output) -> Result<(), CliError> {
    let (g, kept) = load_graph(&args.graph)?;
    let cfg = args.solver.to_config()?;
    let outcome = balcut(&g, &cfg)?;
    let cut_measure = g.measure(outcome.cut());
    output.emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "run",
        "build": build_info(),
        "config": cfg,
        "graph": graph_info(&args.graph, &g, &kept),
        "outcome": &outcome,
        "cut_measure": cut_measure,
    }))?;
    if let BalCutOutcome::Certificate { .. } = &outcome {
        log::info!(
            "no b/4-balanced cut of conductance below gamma/16 exists \
             outside the returned union (measure {cut_measure:.4})"
        );
    }
    Ok(())
}

fn cmd_certify(args: CertifyArgs, output: &Output) -> Result<(), CliError> {
    if args.graph.graph == "-" && args.certificate == "-" {
        return Err(CliError::Input(
            "graph and certificate cannot both read stdin".into(),
        ));
    }
    let (g, _) = load_graph(&args.graph)?;
    let text = read_text_input(&args.certificate, "certificate")?;
    let doc: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("certificate is not JSON: {e}")))?;
    let payload = doc.get("outcome").unwrap_or(&doc);
    if let Some(kind) = payload.get("kind").and_then(|k| k.as_str()) {
        if kind != "certificate" {
            return Err(CliError::Input(format!(
                "outcome kind is {kind:?}, nothing to certify"
            )));
        }
    }
    let alpha = payload
        .get("alpha_bar")
        .or_else(|| payload.get("alpha"))
        .and_then(|a| a.as_f64())
        .ok_or_else(|| CliError::Input("payload has no alpha_bar".into()))?;
    let beta: Vec<f64> = payload
        .get("beta_bar")
        .or_else(|| payload.get("beta"))
        .and_then(|b| b.as_array())
        .ok_or_else(|| CliError::Input("payload has no beta_bar array".into()))?
        .iter()
        .map(|x| x.as_f64().unwrap_or(f64::NAN))
        .collect();
    if beta.len() != g.n() || beta.iter().any(|b| !b.is_finite()) {
        return Err(CliError::Input(format!(
            "beta_bar must hold {} finite entries",
            g.n()
        )));
    }
    let gamma_prime = args
        .gamma_prime
        .or_else(|| payload.get("gamma_certified").and_then(|x| x.as_f64()))
        .ok_or_else(|| {
            CliError::Input("payload has no gamma_certified; pass --gamma-prime".into())
        })?;
    let balance = args
        .balance
        .or_else(|| {
            doc.get("config")
                .and_then(|c| c.get("balance"))
                .and_then(|b| b.as_f64())
        })
        .unwrap_or(0.5);
    if !(gamma_prime > 0.0) || !(balance > 0.0 && balance <= 0.5) || !(args.tol >= 0.0) {
        return Err(CliError::Input(
            "need gamma_prime > 0, balance in (0, 1/2], tol >= 0".into(),
        ));
    }
    let report = verify_dual_feasibility(
        &g,
        alpha,
        &beta,
        balance,
        gamma_prime,
        args.tol,
        &DualCheckOptions::default(),
    )
    .map_err(|e| CliError::Input(e.to_string()))?;
    let feasible = report.feasible();
    output.emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "certify",
        "build": build_info(),
        "graph": graph_info(&args.graph, &g, &None),
        "gamma_prime": gamma_prime,
        "balance": balance,
        "report": report,
        "feasible": feasible,
    }))?;
    if feasible {
        Ok(())
    } else {
        Err(CliError::Contract(
            "certificate failed dual feasibility".into(),
        ))
    }
}

fn cmd_decompose(args: RunArgs, output: &Output) -> Result<(), CliError> {
    let (g, kept) = load_graph(&args.graph)?;
    let cfg = args.solver.to_config()?;
    let report = decompose(&g, &cfg)?;
    output.emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "decompose",
        "build": build_info(),
        "config": cfg,
        "graph": graph_info(&args.graph, &g, &kept),
        "report": report,
    }))
}

fn cmd_bench(args: BenchArgs, output: &Output) -> Result<(), CliError> {
    if args.repeat == 0 {
        return Err(CliError::Input("--repeat must be positive".into()));
    }
    let mut csv = String::from("n,m,gamma,iterations,wall_ms\n");
    for path in &args.graph {
        if path == "-" {
            return Err(CliError::Input("bench reads files, not stdin".into()));
        }
        let g = read_graph(Path::new(path), args.graph_format)?;
        let cfg = args.solver.to_config()?;
        let mut best_ms = f64::INFINITY;
        let mut iterations = 0;
        for _ in 0..args.repeat {
            let start = Instant::now();
            let outcome = balcut(&g, &cfg)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            best_ms = best_ms.min(ms);
            iterations = outcome.iterations();
        }
        csv.push_str(&format!(
            "{},{},{},{},{:.3}\n",
            g.n(),
            g.m(),
            cfg.gamma,
            iterations,
            best_ms
        ));
        log::info!("bench {path}: {best_ms:.1} ms over {} runs", args.repeat);
    }
    output.write(&csv)
}

fn generate(family: &Family) -> Result<Graph, CliError> {
    let need = |ok: bool, msg: &str| {
        if ok {
            Ok(())
        } else {
            Err(CliError::Input(msg.to_string()))
        }
    };
    Ok(match *family {
        Family::Path { n } => {
            need(n >= 2, "path needs n >= 2")?;
            reference::path(n)
        }
        Family::Cycle { n } => {
            need(n >= 3, "cycle needs n >= 3")?;
            reference::cycle(n)
        }
        Family::Complete { n } => {
            need(n >= 2, "complete graph needs n >= 2")?;
            reference::complete(n)
        }
        Family::Barbell { k, bridges } => {
            need(k >= 2, "barbell needs k >= 2")?;
            need(bridges >= 1 && bridges <= k, "bridges must lie in 1..=k")?;
            reference::barbell(k, bridges)
        }
        Family::Dumbbell { k, bridge_weight } => {
            need(k >= 2, "dumbbell needs k >= 2")?;
            need(bridge_weight > 0.0, "bridge weight must be positive")?;
            reference::dumbbell(k, bridge_weight)
        }
        Family::Caterpillar { spine, legs } => {
            need(spine >= 2, "caterpillar needs spine >= 2")?;
            reference::caterpillar(spine, legs)
        }
        Family::CliqueChain {
            ref widths,
            bridge_weight,
        } => {
            need(widths.len() >= 2, "chain needs at least two cliques")?;
            need(widths.iter().all(|&w| w >= 2), "cliques need at least 2 vertices")?;
            need(bridge_weight > 0.0, "bridge weight must be positive")?;
            reference::clique_chain(widths, bridge_weight)
        }
        Family::Grid { rows, cols } => {
            need(rows >= 1 && cols >= 1 && rows * cols >= 2, "grid needs at least 2 vertices")?;
            reference::grid(rows, cols)
        }
        Family::PlantedBisection { n, p_in, p_out, seed } => {
            need(n >= 4 && n % 2 == 0, "planted bisection needs even n >= 4")?;
            need(
                (0.0..=1.0).contains(&p_in) && (0.0..=1.0).contains(&p_out),
                "probabilities must lie in [0, 1]",
            )?;
            need(p_in > 0.0 || p_out > 0.0, "at least one probability must be positive")?;
            reference::planted_bisection(n, p_in, p_out, seed).0
        }
        Family::RandomRegular { n, degree, seed } => {
            need(degree >= 2 && degree < n, "degree must lie in 2..n")?;
            need(n * degree % 2 == 0, "n * degree must be even")?;
            reference::random_regular(n, degree, seed)
        }
        Family::PendantCliques {
            head,
            tail,
            tails,
            bridge_weight,
        } => {
            need(head >= 2 && tail >= 2, "cliques need at least 2 vertices")?;
            need(tails >= 1, "need at least one tail")?;
            need(tails <= head, "at most one tail per head vertex")?;
            need(bridge_weight > 0.0, "bridge weight must be positive")?;
            reference::pendant_cliques(head, tail, tails, bridge_weight)
        }
    })
}

fn cmd_gen(args: GenArgs, output: &Output) -> Result<(), CliError> {
    let g = generate(&args.family)?;
    let text = write_graph(&g, args.graph_format);
    if args.output == "-" {
        print!("{text}");
        return Ok(());
    }
    let path = PathBuf::from(&args.output);
    std::fs::write(&path, &text)
        .map_err(|e| CliError::Input(format!("writing {}: {e}", path.display())))?;
    output.emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "gen",
        "build": build_info(),
        "output": args.output,
        "format": args.graph_format,
        "n": g.n(),
        "m": g.m(),
        "total_volume": g.total_volume(),
    }))
}

fn cmd_selftest(output: &Output) -> Result<(), CliError> {
    let results = run_selftest();
    for r in &results {
        eprintln!(
            "{} {} ({})",
            if r.passed { "ok  " } else { "FAIL" },
            r.name,
            r.detail
        );
    }
    let passed = all_passed(&results);
    output.emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "selftest",
        "build": build_info(),
        "checks": results,
        "passed": passed,
    }))?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Contract("selftest checks failed".into()))
    }
}

fn cmd_info(args: GraphArgs, output: &Output) -> Result<(), CliError> {
    let (g, kept) = load_graph(&args)?;
    let comps = g.connected_components();
    let degrees = g.degrees();
    let (mut dmin, mut dmax) = (f64::INFINITY, 0.0f64);
    for &d in degrees {
        dmin = dmin.min(d);
        dmax = dmax.max(d);
    }
    output.emit(&json!({
        "schema_version": SCHEMA_VERSION,
        "command": "info",
        "build": build_info(),
        "graph": graph_info(&args, &g, &kept),
        "total_edge_weight": g.total_edge_weight(),
        "connected": comps.len() == 1,
        "components": comps.iter().map(|c| c.len()).collect::<Vec<_>>(),
        "min_degree": if g.n() == 0 { 0.0 } else { dmin },
        "max_degree": dmax,
    }))
}

/// Compact human rendering of the JSON document; not a stable surface.
fn render_text(v: &serde_json::Value) -> String {
    let f = |x: &serde_json::Value| x.as_f64().unwrap_or(f64::NAN);
    let mut s = String::new();
    match v["command"].as_str().unwrap_or("") {
        "run" => {
            let o = &v["outcome"];
            let kind = o["kind"].as_str().unwrap_or("?");
            s.push_str(&format!("outcome: {kind}\n"));
            let cut_len = o["cut"].as_array().map_or(0, |c| c.len());
            s.push_str(&format!(
                "cut: {cut_len} vertices, measure {:.4}\n",
                f(&v["cut_measure"])
            ));
            if o["conductance"].is_number() {
                s.push_str(&format!("conductance: {:.6e}\n", f(&o["conductance"])));
            }
            if kind == "certificate" {
                s.push_str(&format!(
                    "alpha_bar: {:.6e}\ngamma_certified: {:.6e}\n",
                    f(&o["alpha_bar"]),
                    f(&o["gamma_certified"])
                ));
            }
            s.push_str(&format!("iterations: {}\n", o["iterations"]));
        }
        "certify" => {
            s.push_str(&format!(
                "value: {:.6e} (needs > {:.6e})\nlambda_min: {:.3e}\nfeasible: {}\n",
                f(&v["report"]["value"]),
                4.0 * f(&v["gamma_prime"]),
                f(&v["report"]["lambda_min"]),
                v["feasible"]
            ));
        }
        "decompose" => {
            let r = &v["report"];
            let sizes: Vec<String> = r["leaves"]
                .as_array()
                .map(|ls| {
                    ls.iter()
                        .map(|l| l["vertices"].as_array().map_or(0, |vs| vs.len()).to_string())
                        .collect()
                })
                .unwrap_or_default();
            s.push_str(&format!(
                "leaves: {} (sizes: {})\ncrossing_weight: {:.6}\ndepth: {} of limit {}\n",
                sizes.len(),
                sizes.join(", "),
                f(&r["crossing_weight"]),
                r["max_depth"],
                r["depth_limit"]
            ));
        }
        "gen" => {
            s.push_str(&format!(
                "wrote n={} m={} to {}\n",
                v["n"],
                v["m"],
                v["output"].as_str().unwrap_or("?")
            ));
        }
        "selftest" => {
            let checks = v["checks"].as_array().map_or(0, |c| c.len());
            s.push_str(&format!("passed: {} ({checks} checks)\n", v["passed"]));
        }
        "info" => {
            let g = &v["graph"];
            s.push_str(&format!(
                "n={} m={} volume={:.4} connected={} components={}\n",
                g["n"],
                g["m"],
                f(&g["total_volume"]),
                v["connected"],
                v["components"]
            ));
        }
        _ => s.push_str(&format!("{v}\n")),
    }
    s
}
