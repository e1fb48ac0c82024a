use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use explab::bounds::{self, BoundReport, ExpansionParams};
use explab::codes::{self, CodeError, LinearCode};
use explab::corpus;
use explab::fields::Field;
use explab::graphs::{BipartiteGraph, Graph};
use explab::oracle::{self, OracleError, MAX_EXPANSION_INPUTS};
use explab::spectral::{self, SpectralError};

#[derive(Parser)]
#[command(name = "explab", version, about = "Expander graphs, expansion bounds and expander codes")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Eigensolver tolerance.
    #[arg(long, global = true, default_value_t = spectral::DEFAULT_TOL)]
    tol: f64,
    /// Write the report here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph (and optionally its edge-vertex graph).
    Graph(GraphArgs),
    /// Evaluate the closed-form bounds for a parameter point, a graph, or the q = 2^{2m} family.
    Bounds(BoundsArgs),
    /// Exhaustively check the inequalities on a graph or on the standing corpus.
    Verify(VerifyArgs),
    /// Build an expander code and brute-force its distance.
    #[command(subcommand)]
    Code(CodeCmd),
}

#[derive(Args)]
#[group(id = "generator", required = true, multiple = false)]
struct GeneratorArgs {
    #[arg(long, value_name = "N", group = "generator")]
    complete: Option<usize>,
    #[arg(long, value_name = "N", group = "generator")]
    cycle: Option<usize>,
    #[arg(long, value_name = "N", group = "generator", requires = "offsets")]
    circulant: Option<usize>,
    #[arg(long, value_name = "Q", group = "generator")]
    paley: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["N", "D"], group = "generator")]
    random: Option<Vec<usize>>,
    #[arg(long, group = "generator")]
    petersen: bool,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    generator: GeneratorArgs,
    #[arg(long, value_delimiter = ',')]
    offsets: Vec<usize>,
    /// Also emit the edge-vertex incidence graph.
    #[arg(long)]
    edge_vertex: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    d: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    delta0: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    lambda1: Option<String>,
    #[arg(long)]
    lambda_min: Option<String>,
    /// Graph file; d, μ, n, λ₁ and λ_min are computed from it.
    #[arg(long, conflicts_with_all = ["d", "mu"])]
    graph: Option<String>,
    /// Family sweep, e.g. `8`, `2..10` or `m=1..10`. Emits CSV.
    #[arg(long, alias = "sweep")]
    sweep_m: Option<String>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("target").required(true).args(["graph", "corpus"])))]
struct VerifyArgs {
    #[arg(long)]
    graph: Option<String>,
    /// `small` (n ≤ 8) or `full` (adds the random n = 10 graphs).
    #[arg(long)]
    corpus: Option<String>,
    /// Also check the edge-vertex expansion bound.
    #[arg(long)]
    all: bool,
}

#[derive(Subcommand)]
enum CodeCmd {
    /// The constraint-stamped code on the edge-vertex graph.
    Ss(CodeArgs),
    /// The neighborhood expander map applied to a length-n code.
    Exp(CodeArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Graph file or name (k4, c5, petersen, paley13, ...).
    #[arg(long)]
    graph: String,
    /// rep3, parity4, hamming74, full3, rs:n:k:q; `/q` picks the field, e.g. rep3/3.
    #[arg(long)]
    inner: String,
}

enum Failure {
    BadInput(String),
    Hypothesis(String),
    Violation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::BadInput(_) => 2,
            Failure::Hypothesis(_) => 3,
            Failure::Violation(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::BadInput(m) | Failure::Hypothesis(m) | Failure::Violation(m) => m,
        }
    }
}

fn bad(e: impl std::fmt::Display) -> Failure {
    Failure::BadInput(e.to_string())
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::CounterexampleFound(_) => Failure::Violation(e.to_string()),
            _ => bad(e),
        }
    }
}

impl From<CodeError> for Failure {
    fn from(e: CodeError) -> Self {
        match e {
            CodeError::InternalMismatch(_) | CodeError::RateBoundViolated { .. } => Failure::Violation(e.to_string()),
            CodeError::Oracle(o) => o.into(),
            _ => bad(e),
        }
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        bad(e)
    }
}

#[derive(Serialize)]
struct Meta {
    seed: u64,
    tol: f64,
    tool_version: &'static str,
    input_digest: String,
}

struct Ctx {
    seed: u64,
    tol: f64,
    hasher: Sha256,
}

impl Ctx {
    fn absorb(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    fn meta(&self) -> Meta {
        Meta {
            seed: self.seed,
            tol: self.tol,
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digest: hex::encode(self.hasher.clone().finalize()),
        }
    }

    fn load_graph(&mut self, arg: &str) -> Result<(String, Graph), Failure> {
        let path = Path::new(arg);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(bad)?;
            self.absorb(text.as_bytes());
            let value: Value = serde_json::from_str(&text).map_err(bad)?;
            let inner = value.get("graph").cloned().unwrap_or(value);
            let g: Graph = serde_json::from_value(inner).map_err(bad)?;
            let name = path.file_stem().map_or(arg.to_string(), |s| s.to_string_lossy().into_owned());
            return Ok((name, g));
        }
        Ok((arg.to_string(), named_graph(arg)?))
    }
}

fn named_graph(name: &str) -> Result<Graph, Failure> {
    let lower = name.to_ascii_lowercase();
    let num = |prefix: &str| lower.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    let g = if lower == "petersen" {
        Ok(Graph::petersen())
    } else if let Some(q) = num("paley") {
        Graph::paley(q)
    } else if let Some(n) = num("k") {
        Graph::complete(n)
    } else if let Some(n) = num("c") {
        Graph::cycle(n)
    } else {
        return Err(Failure::BadInput(format!("unknown graph `{name}` (not a file or a known name)")));
    };
    g.map_err(bad)
}

fn field_of_order(q: u32) -> Result<Field, Failure> {
    Field::with_order(q).map_err(bad)
}

fn parse_code(arg: &str) -> Result<LinearCode, Failure> {
    if let Some(rest) = arg.strip_prefix("rs:") {
        let parts: Vec<usize> = rest.split(':').map(|x| x.parse().map_err(bad)).collect::<Result<_, _>>()?;
        let [n, k, q] = parts[..] else { return Err(bad("expected rs:n:k:q")) };
        let field = field_of_order(q as u32)?;
        return Ok(codes::reed_solomon(n, k, &field)?);
    }
    if arg == "hamming74" {
        return Ok(codes::hamming74());
    }
    let (name, q) = match arg.split_once('/') {
        Some((name, q)) => (name, q.parse::<u32>().map_err(bad)?),
        None => (arg, 2),
    };
    let field = field_of_order(q)?;
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    let code = if let Some(n) = num("rep") {
        codes::repetition(n, &field)?
    } else if let Some(n) = num("parity") {
        codes::parity(n, &field)?
    } else if let Some(n) = num("full") {
        codes::full_space(n, &field)?
    } else {
        return Err(bad(format!("unknown inner code `{arg}`")));
    };
    Ok(code)
}

fn parse_number(s: &str) -> Result<f64, Failure> {
    match bounds::parse_fraction(s) {
        Ok(r) => Ok(bounds::ratio_to_f64(r)),
        Err(e) => s.trim().parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(e)),
    }
}

fn opt_number(s: &Option<String>) -> Result<Option<f64>, Failure> {
    s.as_deref().map(parse_number).transpose()
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(bad),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn cmd_graph(ctx: &mut Ctx, args: &GraphArgs, out: &Option<PathBuf>) -> Result<(), Failure> {
    let gen = &args.generator;
    let g = if let Some(n) = gen.complete {
        Graph::complete(n)
    } else if let Some(n) = gen.cycle {
        Graph::cycle(n)
    } else if let Some(n) = gen.circulant {
        Graph::circulant(n, &args.offsets)
    } else if let Some(q) = gen.paley {
        Graph::paley(q)
    } else if let Some(nd) = &gen.random {
        Graph::random_regular(nd[0], nd[1], ctx.seed)
    } else {
        Ok(Graph::petersen())
    }
    .map_err(bad)?;
    let ev = if args.edge_vertex { Some(BipartiteGraph::edge_vertex(&g).map_err(bad)?) } else { None };
    let doc = json!({ "meta": ctx.meta(), "graph": g, "edge_vertex": ev });
    emit(out, &to_json(&doc))
}

fn parse_sweep(arg: &str) -> Result<std::ops::RangeInclusive<u32>, Failure> {
    let s = arg.trim().trim_start_matches("m=");
    let parse = |x: &str| x.trim().parse::<u32>().map_err(bad);
    let range = match s.split_once("..") {
        Some((a, b)) => parse(a)?..=parse(b.trim_start_matches('='))?,
        None => {
            let m = parse(s)?;
            m..=m
        }
    };
    if *range.start() == 0 || *range.end() > 30 || range.is_empty() {
        return Err(bad(format!("sweep range `{arg}` must lie in 1..30")));
    }
    Ok(range)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or(String::new(), |v| format!("{v:.17e}"))
}

fn cmd_bounds(ctx: &mut Ctx, args: &BoundsArgs, out: &Option<PathBuf>) -> Result<(), Failure> {
    if let Some(arg) = &args.sweep_m {
        let range = parse_sweep(arg)?;
        let meta = ctx.meta();
        let mut csv = format!(
            "# seed={} tol={} tool_version={} input_digest={}\n",
            meta.seed, meta.tol, meta.tool_version, meta.input_digest
        );
        csv += "m,d,mu,epsilon,hypothesis_holds,relative_distance,ss_original,improvement_factor,c_alpha0\n";
        for m in range {
            let row = bounds::family_row(m);
            if !row.hypothesis_holds {
                eprintln!("m = {m}: d*epsilon <= mu, row flagged");
            }
            writeln!(
                csv,
                "{},{},{},{:.17e},{},{},{},{},{}",
                row.m,
                row.d,
                row.mu,
                row.epsilon,
                row.hypothesis_holds,
                fmt_opt(row.relative_distance),
                fmt_opt(row.ss_original),
                fmt_opt(row.improvement_factor),
                fmt_opt(row.c_alpha0)
            )
            .unwrap();
        }
        return emit(out, &csv);
    }

    let mut params;
    let mut graph_info = None;
    if let Some(arg) = &args.graph {
        let (name, g) = ctx.load_graph(arg)?;
        let gs = spectral::graph_spectrum(&g, ctx.tol)?;
        params = ExpansionParams::new(gs.degree as f64, gs.mu());
        params.n = Some(g.n() as f64);
        params.lambda1 = Some(gs.spectrum.lambda1());
        params.lambda_min = Some(gs.spectrum.lambda_min());
        if let Some(c) = gs.certified {
            params.mu = c.mu as f64;
            params.lambda1 = Some(c.lambda1 as f64);
            params.lambda_min = Some(c.lambda_min as f64);
        }
        graph_info = Some(json!({
            "name": name,
            "n": g.n(),
            "degree": gs.degree,
            "mu": gs.mu(),
            "certified": gs.certified,
            "degenerate": gs.degenerate(),
        }));
    } else {
        let (Some(d), Some(mu)) = (opt_number(&args.d)?, opt_number(&args.mu)?) else {
            return Err(bad("bounds needs --d and --mu, --graph, or --sweep-m"));
        };
        params = ExpansionParams::new(d, mu);
        params.n = opt_number(&args.n)?;
        params.lambda1 = opt_number(&args.lambda1)?;
        params.lambda_min = opt_number(&args.lambda_min)?;
    }
    if let Some(c) = opt_number(&args.c)? {
        params.c = c;
    }
    params.alpha = opt_number(&args.alpha)?;
    params.epsilon = opt_number(&args.epsilon)?;
    params.r = opt_number(&args.r)?;
    params.delta0 = opt_number(&args.delta0)?;
    params.gamma = opt_number(&args.gamma)?;
    if params.d <= 0.0 || params.mu < 0.0 {
        return Err(bad("need d > 0 and mu >= 0"));
    }
    let report = BoundReport::evaluate(&params);
    let violated = report.degenerate_reasons.iter().any(|r| r.starts_with("d*epsilon"));
    emit(out, &to_json(&json!({ "meta": ctx.meta(), "graph": graph_info, "report": report })))?;
    if violated {
        return Err(Failure::Hypothesis(format!(
            "hypothesis d*epsilon > mu fails: d = {}, epsilon = {}, mu = {}",
            params.d,
            params.epsilon.unwrap_or(f64::NAN),
            params.mu
        )));
    }
    Ok(())
}

fn expansion_checks(g: &Graph, d: f64, mu: f64) -> Result<Value, Failure> {
    let h = BipartiteGraph::edge_vertex(g).map_err(bad)?;
    let profile = oracle::ExpansionProfile::of_bipartite(&h)?;
    let mut rows = Vec::new();
    for alpha in [Ratio::new(1, 4), Ratio::new(1, 3), Ratio::new(1, 2)] {
        if (alpha * Ratio::from_integer(h.n_in() as i64)).to_integer() == 0 {
            continue;
        }
        let w = profile.expansion(alpha)?;
        let bound = bounds::improved_bound(d, mu, bounds::ratio_to_f64(alpha)).value;
        let holds = bounds::ratio_to_f64(w.ratio) >= bound - 1e-9;
        rows.push(json!({
            "alpha": alpha.to_string(),
            "exact": w.ratio.to_string(),
            "witness": w.members(),
            "improved_bound": bound,
            "holds": holds,
        }));
    }
    Ok(Value::Array(rows))
}

fn cmd_verify(ctx: &mut Ctx, args: &VerifyArgs, out: &Option<PathBuf>) -> Result<(), Failure> {
    let (graphs, corpus_mode) = match (&args.graph, args.corpus.as_deref()) {
        (Some(arg), _) => (vec![ctx.load_graph(arg)?], false),
        (None, Some("small")) => (corpus::small().into_iter().map(|c| (c.name, c.graph)).collect(), true),
        (None, Some("full")) => (corpus::full().into_iter().map(|c| (c.name, c.graph)).collect(), true),
        (None, Some(other)) => return Err(bad(format!("unknown corpus `{other}` (small or full)"))),
        (None, None) => unreachable!("clap requires a target"),
    };
    let mut instances = Vec::new();
    let mut violations = 0u64;
    for (name, g) in &graphs {
        let gs = spectral::graph_spectrum(g, ctx.tol)?;
        let ac = oracle::verify_alon_chung(g, &gs, name)?;
        let nb = oracle::verify_nbhd_and_boundary(g, &gs, name)?;
        violations += ac.violation_count + nb.violation_count;
        let expansion = if args.all || corpus_mode {
            match expansion_checks(g, gs.degree as f64, gs.mu()) {
                Ok(rows) => {
                    violations += rows.as_array().unwrap().iter().filter(|r| r["holds"] == false).count() as u64;
                    rows
                }
                Err(Failure::BadInput(msg)) if corpus_mode => json!({ "skipped": msg, "cap": MAX_EXPANSION_INPUTS }),
                Err(e) => return Err(e),
            }
        } else {
            Value::Null
        };
        eprintln!(
            "{name}: {} violations{}",
            ac.violation_count + nb.violation_count,
            if gs.degenerate() { " DEGENERATE (mu = d)" } else { "" }
        );
        instances.push(json!({
            "name": name,
            "n": g.n(),
            "degree": gs.degree,
            "mu": gs.mu(),
            "degenerate": gs.degenerate(),
            "alon_chung": ac,
            "nbhd_and_boundary": nb,
            "expansion": expansion,
        }));
    }
    let doc = json!({ "meta": ctx.meta(), "instances": instances, "violations": violations });
    emit(out, &to_json(&doc))?;
    if violations > 0 {
        return Err(Failure::Violation(format!("{violations} inequality violations")));
    }
    Ok(())
}

fn cmd_code(ctx: &mut Ctx, cmd: &CodeCmd, out: &Option<PathBuf>) -> Result<(), Failure> {
    let (CodeCmd::Ss(args) | CodeCmd::Exp(args)) = cmd;
    let (name, g) = ctx.load_graph(&args.graph)?;
    let inner = parse_code(&args.inner)?;
    match cmd {
        CodeCmd::Ss(_) => {
            let (code, report) = codes::sipser_spielman_report(&g, &inner)?;
            let doc = json!({ "meta": ctx.meta(), "graph": name, "inner": args.inner, "code": code, "report": report });
            emit(out, &to_json(&doc))?;
            if !report.hypothesis_holds {
                return Err(Failure::Hypothesis("d*epsilon <= mu: the distance bound does not apply".into()));
            }
            if report.meets_bound == Some(false) {
                return Err(Failure::Violation("distance below the bound".into()));
            }
        }
        CodeCmd::Exp(_) => {
            let report = codes::expander_map_distance(&g, &inner)?;
            let doc = json!({ "meta": ctx.meta(), "graph": name, "inner": args.inner, "code": inner, "report": report });
            emit(out, &to_json(&doc))?;
            if !report.meets_bound {
                return Err(Failure::Violation("distance below the bound".into()));
            }
        }
    }
    Ok(())
}

/// Arguments that determine the output, i.e. everything except the output path.
fn digest_args() -> Vec<String> {
    let mut out = Vec::new();
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        if a == "-o" || a == "--output" {
            args.next();
        } else if !a.starts_with("--output=") {
            out.push(a);
        }
    }
    out
}

fn configure_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("EXPLAB_THREADS") {
        let n: usize = v.parse().map_err(|_| bad(format!("EXPLAB_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().map_err(bad)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let mut ctx = Ctx { seed: cli.seed, tol: cli.tol, hasher: Sha256::new() };
    for a in digest_args() {
        ctx.absorb(a.as_bytes());
    }
    match &cli.cmd {
        Cmd::Graph(a) => cmd_graph(&mut ctx, a, &cli.output),
        Cmd::Bounds(a) => cmd_bounds(&mut ctx, a, &cli.output),
        Cmd::Verify(a) => cmd_verify(&mut ctx, a, &cli.output),
        Cmd::Code(c) => cmd_code(&mut ctx, c, &cli.output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
