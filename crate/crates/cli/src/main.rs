//! `ctqw`: rank graphs with quantum-walk and classical centralities,
//! generate seeded test graphs, compare rankings and run experiment sweeps.

mod scores;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ctqw_rank::experiments::diagnostics::run_diagnostics;
use ctqw_rank::experiments::sweep::{run_sweep, ExperimentManifest};
use ctqw_rank::experiments::{format_sig10, run_small_graph_suite};
use ctqw_rank::generators::{k_out, scale_free, Generated, KOutParams, ScaleFreeParams};
use ctqw_rank::graph::parse_edge_list;
use ctqw_rank::metrics::{top1_match, top_k_overlap, zero_degree_inversions};
use ctqw_rank::quantum::QuantumMethod;
use ctqw_rank::{hits, kendall_tau, pagerank, DirectedGraph, Error, Mode, Ranking};
use ctqw_rank::{DEFAULT_ALPHA, DEFAULT_MAX_ITER, DEFAULT_TOL};

const VERSION: &str = env!("CARGO_PKG_VERSION");
const OUTPUT_DIR_ENV: &str = "CTQW_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "ctqw",
    version,
    about = "Quantum-walk centrality for directed graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score every node of a graph with one method.
    Rank(RankArgs),
    /// Write a seeded random graph as an edge list.
    Generate(GenerateArgs),
    /// Agreement (F1, F10, Kendall tau-b) between two score files.
    Compare(CompareArgs),
    /// Recompute the small-graph reference tables; exit status 1 on mismatch.
    Tables(TablesArgs),
    /// Run a seeded agreement sweep from a manifest or preset.
    Sweep(SweepArgs),
    /// Dump eigenvalues, initial-state overlaps and dominant eigenvectors.
    Diagnose(DiagnoseArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Cqhitsu,
    Cqhitsw,
    Cqpru,
    Cqprw,
    Hits,
    Pagerank,
}

impl MethodArg {
    fn quantum(self) -> Option<QuantumMethod> {
        match self {
            MethodArg::Cqhitsu => Some(QuantumMethod::CqHitsU),
            MethodArg::Cqhitsw => Some(QuantumMethod::CqHitsW),
            MethodArg::Cqpru => Some(QuantumMethod::CqPrU),
            MethodArg::Cqprw => Some(QuantumMethod::CqPrW),
            MethodArg::Hits | MethodArg::Pagerank => None,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Hits => "HITS",
            MethodArg::Pagerank => "PageRank",
            q => q.quantum().expect("quantum").name(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Hub,
    #[value(alias = "authority")]
    Auth,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Hub => Mode::Hub,
            ModeArg::Auth => Mode::Authority,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct GraphInput {
    /// Edge-list file (1-based labels, `#` comments, optional `n=<count>` header).
    #[arg(long)]
    graph: PathBuf,
    /// Node count, for graphs whose highest-numbered nodes are isolated.
    #[arg(long)]
    nodes: Option<usize>,
}

impl GraphInput {
    fn load(&self) -> Result<DirectedGraph, CliError> {
        let text = fs::read_to_string(&self.graph)
            .map_err(|e| CliError::Input(format!("{}: {e}", self.graph.display())))?;
        let parsed = parse_edge_list(&text, self.nodes)
            .map_err(|e| CliError::Input(format!("{}: {e}", self.graph.display())))?;
        if parsed.duplicates > 0 {
            log::warn!("collapsed {} repeated edges", parsed.duplicates);
        }
        Ok(parsed.graph)
    }
}

#[derive(Args)]
struct RankArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "hub")]
    mode: ModeArg,
    /// Damping factor.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Stopping tolerance of the classical power iterations.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(subcommand)]
    kind: GeneratorKind,
    /// Directory for the edge-list file.
    #[arg(long, global = true, env = OUTPUT_DIR_ENV, default_value = ".")]
    out_dir: PathBuf,
    /// Print the edge list instead of writing a file.
    #[arg(long, global = true)]
    stdout: bool,
}

#[derive(Subcommand)]
enum GeneratorKind {
    /// Directed preferential attachment with in/out degree offsets.
    ScaleFree {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.41)]
        alpha: f64,
        #[arg(long, default_value_t = 0.54)]
        beta: f64,
        #[arg(long, default_value_t = 0.05)]
        gamma: f64,
        #[arg(long, default_value_t = 0.2)]
        delta_in: f64,
        #[arg(long, default_value_t = 0.0)]
        delta_out: f64,
    },
    /// Every node gets exactly k out-edges, targets chosen ∝ alpha_w + in-degree.
    KOut {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 0.3)]
        alpha_w: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CompareArgs {
    /// Score file (JSON from `rank`, or CSV with `node` and `score` columns).
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args)]
struct TablesArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    /// 100 scale-free graphs of 128 nodes and 50 of 256.
    Desk,
    /// 2174 scale-free graphs from 128 to 1024 nodes.
    Full,
    /// 300 k-out graphs of 128 nodes.
    KOut,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML manifest.
    #[arg(long, conflicts_with = "preset")]
    manifest: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Shorthand for `--preset full`.
    #[arg(long, conflicts_with_all = ["preset", "manifest"])]
    full_scale: bool,
    /// Base seed for presets (manifests carry their own).
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Output directory; falls back to the manifest's `output`, then `ctqw-sweep`.
    #[arg(long, env = OUTPUT_DIR_ENV)]
    output: Option<PathBuf>,
    /// Format of the aggregate table printed on stdout.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct DiagnoseArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "hub")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
    /// Number of eigenvectors (largest overlaps first) to export.
    #[arg(long, default_value_t = 3)]
    select: usize,
    /// Directory for `spectrum.csv` and `eigenvectors.csv`.
    #[arg(long, env = OUTPUT_DIR_ENV)]
    output: Option<PathBuf>,
}

enum CliError {
    Input(String),
    Library(Error),
    /// Reference tables did not reproduce.
    Mismatch,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Mismatch => 1,
            CliError::Library(Error::Convergence { .. }) => 3,
            CliError::Input(_) | CliError::Library(_) => 2,
        }
    }
}

/// Rounds to 10 significant digits for machine-readable output.
fn round10(x: f64) -> Value {
    format_sig10(x)
        .parse::<f64>()
        .map(Value::from)
        .unwrap_or(Value::Null)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn rank_cmd(args: &RankArgs) -> Result<(), CliError> {
    let g = args.input.load()?;
    let mode = Mode::from(args.mode);
    let scores = match (args.method, args.method.quantum()) {
        (_, Some(q)) => ctqw_rank::rank(&g, &q.spec(mode, args.alpha))?.values,
        (MethodArg::Hits, None) => hits(&g, args.tol, args.max_iter)?.into_mode(mode).values,
        _ => pagerank(&g, args.alpha, mode, args.tol, args.max_iter)?.values,
    };
    let positions = Ranking::new(&scores)?.positions();
    let inversions: Vec<usize> = zero_degree_inversions(&g, &scores, mode)?
        .iter()
        .map(|i| i + 1)
        .collect();
    let mut warnings = Vec::new();
    if !inversions.is_empty() {
        warnings.push(format!(
            "nodes with zero {}-degree ranked above nodes with positive degree: {:?}",
            if mode == Mode::Hub { "out" } else { "in" },
            inversions
        ));
    }
    if !g.is_weakly_connected() {
        warnings.push("graph is not weakly connected".to_string());
    }

    let text = match args.format {
        Format::Json => {
            let rows: Vec<Value> = scores
                .iter()
                .zip(&positions)
                .enumerate()
                .map(|(i, (&s, &p))| json!({"node": i + 1, "score": round10(s), "rank": p}))
                .collect();
            let doc = json!({
                "tool": "ctqw",
                "version": VERSION,
                "command": "rank",
                "parameters": {
                    "graph": args.input.graph.display().to_string(),
                    "nodes": g.node_count(),
                    "edges": g.edge_count(),
                    "method": args.method.name(),
                    "mode": mode.as_str(),
                    "alpha": args.alpha,
                    "tol": args.tol,
                    "max_iter": args.max_iter,
                },
                "scores": rows,
                "pathology": { "zero_degree_inversions": inversions },
                "warnings": warnings,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["node", "score", "rank"])
                .map_err(|e| CliError::Input(e.to_string()))?;
            for (i, (&s, &p)) in scores.iter().zip(&positions).enumerate() {
                w.write_record([(i + 1).to_string(), format_sig10(s), p.to_string()])
                    .map_err(|e| CliError::Input(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Input(e.to_string()))?)
                .expect("utf-8")
        }
        Format::Text => {
            let mut out = format!(
                "# ctqw {VERSION} {} {} alpha={}\n{:<6}{:>16}{:>6}\n",
                args.method.name(),
                mode,
                args.alpha,
                "node",
                "score",
                "rank"
            );
            for (i, (&s, &p)) in scores.iter().zip(&positions).enumerate() {
                out.push_str(&format!("{:<6}{:>16}{:>6}\n", i + 1, format_sig10(s), p));
            }
            for w in &warnings {
                out.push_str(&format!("# warning: {w}\n"));
            }
            out
        }
    };
    for w in &warnings {
        log::warn!("{w}");
    }
    emit(&text, args.output.as_deref())
}

fn generate_cmd(args: &GenerateArgs) -> Result<(), CliError> {
    let (label, generated): (String, Generated) = match args.kind {
        GeneratorKind::ScaleFree {
            n,
            seed,
            alpha,
            beta,
            gamma,
            delta_in,
            delta_out,
        } => {
            let p = ScaleFreeParams {
                n,
                alpha,
                beta,
                gamma,
                delta_in,
                delta_out,
                seed,
            };
            (p.label(), scale_free(&p)?)
        }
        GeneratorKind::KOut {
            n,
            k,
            alpha_w,
            seed,
        } => {
            let p = KOutParams {
                n,
                k,
                alpha_w,
                seed,
            };
            (p.label(), k_out(&p)?)
        }
    };
    let text = format!(
        "# ctqw {VERSION} {label} seed_used={} attempts={}\n{}",
        generated.seed_used,
        generated.attempts,
        generated.graph.to_edge_list()
    );
    if args.stdout {
        return emit(&text, None);
    }
    fs::create_dir_all(&args.out_dir)?;
    let path = args.out_dir.join(format!("{label}.edges"));
    fs::write(&path, text)?;
    println!("{}", path.display());
    Ok(())
}

fn compare_cmd(args: &CompareArgs) -> Result<(), CliError> {
    let a = scores::read_scores(&args.a)?;
    let b = scores::read_scores(&args.b)?;
    if a.nodes != b.nodes {
        return Err(CliError::Input(format!(
            "node sets differ: {} has {} nodes, {} has {}",
            args.a.display(),
            a.nodes.len(),
            args.b.display(),
            b.nodes.len()
        )));
    }
    let n = a.scores.len();
    let k = n.min(10);
    let tau = match kendall_tau(&a.scores, &b.scores) {
        Ok(t) => round10(t),
        Err(Error::UndefinedTau) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let doc = json!({
        "tool": "ctqw",
        "version": VERSION,
        "command": "compare",
        "parameters": {
            "a": args.a.display().to_string(),
            "b": args.b.display().to_string(),
            "nodes": n,
            "top_k": k,
        },
        "f1": if top1_match(&a.scores, &b.scores)? { 1 } else { 0 },
        "f10": top_k_overlap(&a.scores, &b.scores, k)?,
        "tau": tau,
    });
    emit(
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializable")
        ),
        None,
    )
}

fn tables_cmd(args: &TablesArgs) -> Result<(), CliError> {
    let report = run_small_graph_suite()?;
    let failures = report.failures();
    let text = match args.format {
        Format::Json => {
            let doc = json!({
                "tool": "ctqw",
                "version": VERSION,
                "command": "tables",
                "passed": report.passed(),
                "failures": failures,
                "report": report,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Csv => {
            let mut out = String::from("table,column,node,expected,actual,passed\n");
            for c in &report.cells {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    c.table,
                    c.column,
                    c.node,
                    c.expected,
                    format_sig10(c.actual),
                    c.passed
                ));
            }
            out
        }
        Format::Text => {
            let mut out = report.to_text();
            out.push_str(&format!(
                "\nreference suite: {} ({} scores, {} rankings)\n",
                if report.passed() { "PASS" } else { "FAIL" },
                report.cells.len(),
                report.orders.len()
            ));
            for f in &failures {
                out.push_str(&format!("  mismatch: {f}\n"));
            }
            out
        }
    };
    emit(&text, None)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Mismatch)
    }
}

fn sweep_cmd(args: &SweepArgs) -> Result<(), CliError> {
    let preset = if args.full_scale {
        Some(Preset::Full)
    } else {
        args.preset
    };
    let manifest = match (&args.manifest, preset) {
        (Some(path), _) => ExperimentManifest::from_path(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        (None, Some(Preset::Desk)) => ExperimentManifest::desk_scale(args.seed),
        (None, Some(Preset::Full)) => ExperimentManifest::full_scale(args.seed),
        (None, Some(Preset::KOut)) => ExperimentManifest::k_out(300, args.seed),
        (None, None) => return Err(CliError::Input("give --manifest FILE or --preset".into())),
    };
    let dir = args
        .output
        .clone()
        .or_else(|| manifest.output.clone())
        .unwrap_or_else(|| PathBuf::from("ctqw-sweep"));
    let result = run_sweep(&manifest)?;
    let paths = result.write_outputs(&dir)?;
    let failures = result.total_failures();
    if failures > 0 {
        log::warn!("{failures} comparisons failed and were excluded from the means");
    }
    for p in &paths {
        log::info!("wrote {}", p.display());
    }
    let text = match args.format {
        Format::Json => {
            let doc = json!({
                "tool": "ctqw",
                "version": VERSION,
                "command": "sweep",
                "manifest": result.manifest,
                "rows": result.rows,
                "timing": result.timing,
                "outputs": paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Csv => result.to_csv_string()?,
        Format::Text => {
            let mut out = format!(
                "{:<6}{:<9}{:<10}{:>6}{:>8}{:>8}{:>9}{:>6}\n",
                "size", "method", "mode", "n", "F1", "F10", "tau", "fail"
            );
            for r in &result.rows {
                out.push_str(&format!(
                    "{:<6}{:<9}{:<10}{:>6}{:>8.3}{:>8.2}{:>9.4}{:>6}\n",
                    r.size,
                    r.method.name(),
                    r.mode,
                    r.n_graphs,
                    r.f1_mean,
                    r.f10_mean,
                    r.tau_mean,
                    r.failures
                ));
            }
            out
        }
    };
    emit(&text, None)
}

fn diagnose_cmd(args: &DiagnoseArgs) -> Result<(), CliError> {
    let Some(method) = args.method.quantum() else {
        return Err(CliError::Input("diagnostics need a quantum method".into()));
    };
    let g = args.input.load()?;
    let spec = method.spec(args.mode.into(), args.alpha);
    let d = run_diagnostics(&g, &spec, args.select)?;
    let mut outputs = Vec::new();
    if let Some(dir) = &args.output {
        fs::create_dir_all(dir)?;
        let spectrum = dir.join("spectrum.csv");
        let vectors = dir.join("eigenvectors.csv");
        d.write_spectrum_csv(fs::File::create(&spectrum)?)?;
        d.write_eigenvectors_csv(fs::File::create(&vectors)?)?;
        outputs = vec![
            spectrum.display().to_string(),
            vectors.display().to_string(),
        ];
    }
    let dominant = d.dominant();
    let doc = json!({
        "tool": "ctqw",
        "version": VERSION,
        "command": "diagnose",
        "parameters": {
            "graph": args.input.graph.display().to_string(),
            "method": method.name(),
            "mode": spec.mode.as_str(),
            "alpha": spec.alpha,
            "select": args.select,
        },
        "overlap_total": round10(d.overlap_total()),
        "zero_overlaps": d.zero_overlap_count(),
        "dominant": {
            "j": dominant + 1,
            "theta": round10(d.eigenvalues[dominant]),
            "overlap": round10(d.overlaps[dominant]),
        },
        "eigenvalues": d.eigenvalues.iter().map(|&v| round10(v)).collect::<Vec<_>>(),
        "overlaps": d.overlaps.iter().map(|&v| round10(v)).collect::<Vec<_>>(),
        "selected": d.selected.iter().map(|j| j + 1).collect::<Vec<_>>(),
        "outputs": outputs,
    });
    emit(
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&doc).expect("serializable")
        ),
        None,
    )
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rank(a) => rank_cmd(a),
        Command::Generate(a) => generate_cmd(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Tables(a) => tables_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Diagnose(a) => diagnose_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Input(msg) => eprintln!("error: {msg}"),
                CliError::Library(err) => eprintln!("error: {err}"),
                CliError::Mismatch => eprintln!("error: reference tables did not reproduce"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
