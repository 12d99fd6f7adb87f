//! Seeded agreement sweeps: generate graphs, rank them with quantum and
//! classical methods, and aggregate F₁ / F₁₀ / Kendall τ-b.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{classical_baseline, format_sig10};
use crate::generators::{derive_seed, k_out, scale_free, Generated, KOutParams, ScaleFreeParams};
use crate::graph::{DirectedGraph, Mode};
use crate::metrics::{agreement, AgreementReport};
use crate::quantum::{
    hamiltonian, initial_state, limiting_distribution_from, HamiltonianKind, QuantumMethod,
};
use crate::spectral::{eigh, SpectralDecomposition};
use crate::{Error, Result, DEFAULT_ALPHA};

/// Shape parameters of the graph generator; size and seed come from the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorConfig {
    ScaleFree {
        #[serde(default = "sf_alpha")]
        alpha: f64,
        #[serde(default = "sf_beta")]
        beta: f64,
        #[serde(default = "sf_gamma")]
        gamma: f64,
        #[serde(default = "sf_delta_in")]
        delta_in: f64,
        #[serde(default)]
        delta_out: f64,
    },
    KOut {
        #[serde(default = "ko_k")]
        k: usize,
        #[serde(default = "ko_alpha_w")]
        alpha_w: f64,
    },
}

fn sf_alpha() -> f64 {
    ScaleFreeParams::new(3, 0).alpha
}
fn sf_beta() -> f64 {
    ScaleFreeParams::new(3, 0).beta
}
fn sf_gamma() -> f64 {
    ScaleFreeParams::new(3, 0).gamma
}
fn sf_delta_in() -> f64 {
    ScaleFreeParams::new(3, 0).delta_in
}
fn ko_k() -> usize {
    5
}
fn ko_alpha_w() -> f64 {
    0.3
}

impl GeneratorConfig {
    pub fn scale_free_default() -> Self {
        let p = ScaleFreeParams::new(3, 0);
        GeneratorConfig::ScaleFree {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            delta_in: p.delta_in,
            delta_out: p.delta_out,
        }
    }

    pub fn k_out_default() -> Self {
        GeneratorConfig::KOut {
            k: ko_k(),
            alpha_w: ko_alpha_w(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            GeneratorConfig::ScaleFree { .. } => self.scale_free_params(n, 0).validate(),
            GeneratorConfig::KOut { k, alpha_w } => KOutParams {
                n,
                k,
                alpha_w,
                seed: 0,
            }
            .validate(),
        }
    }

    fn scale_free_params(&self, n: usize, seed: u64) -> ScaleFreeParams {
        match *self {
            GeneratorConfig::ScaleFree {
                alpha,
                beta,
                gamma,
                delta_in,
                delta_out,
            } => ScaleFreeParams {
                n,
                alpha,
                beta,
                gamma,
                delta_in,
                delta_out,
                seed,
            },
            GeneratorConfig::KOut { .. } => unreachable!("not a scale-free configuration"),
        }
    }

    /// Weakly connected graph with `n` nodes from `seed`.
    pub fn generate(&self, n: usize, seed: u64) -> Result<Generated> {
        match *self {
            GeneratorConfig::ScaleFree { .. } => scale_free(&self.scale_free_params(n, seed)),
            GeneratorConfig::KOut { k, alpha_w } => k_out(&KOutParams {
                n,
                k,
                alpha_w,
                seed,
            }),
        }
    }
}

/// Sweep configuration, usually loaded from TOML:
///
/// ```toml
/// base_seed = 7
/// sizes = [128]
/// graphs_per_size = [100]
/// methods = ["CQHITSu", "CQHITSw", "CQPRu", "CQPRw"]
/// modes = ["hub", "authority"]
///
/// [generator]
/// kind = "scale_free"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    pub generator: GeneratorConfig,
    pub sizes: Vec<usize>,
    /// One count per entry of `sizes`.
    pub graphs_per_size: Vec<usize>,
    #[serde(default = "all_methods")]
    pub methods: Vec<QuantumMethod>,
    #[serde(default = "both_modes")]
    pub modes: Vec<Mode>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn all_methods() -> Vec<QuantumMethod> {
    QuantumMethod::ALL.to_vec()
}
fn both_modes() -> Vec<Mode> {
    Mode::BOTH.to_vec()
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

/// Graph counts per size used for the full-scale scale-free study.
pub const FULL_SCALE_SIZES: [(usize, usize); 8] = [
    (128, 800),
    (256, 400),
    (384, 267),
    (512, 200),
    (640, 160),
    (768, 133),
    (896, 114),
    (1024, 100),
];

impl ExperimentManifest {
    /// Scale-free sweep over the given `(size, count)` pairs with all
    /// methods and both modes.
    pub fn scale_free(sizes: &[(usize, usize)], base_seed: u64) -> Self {
        Self {
            generator: GeneratorConfig::scale_free_default(),
            sizes: sizes.iter().map(|s| s.0).collect(),
            graphs_per_size: sizes.iter().map(|s| s.1).collect(),
            methods: all_methods(),
            modes: both_modes(),
            alpha: DEFAULT_ALPHA,
            base_seed,
            output: None,
        }
    }

    /// Laptop-sized scale-free sweep: 100 graphs of 128 nodes, 50 of 256.
    pub fn desk_scale(base_seed: u64) -> Self {
        Self::scale_free(&[(128, 100), (256, 50)], base_seed)
    }

    pub fn full_scale(base_seed: u64) -> Self {
        Self::scale_free(&FULL_SCALE_SIZES, base_seed)
    }

    /// k-out sweep on 128-node graphs with `k = 5`, `alpha_w = 0.3`.
    pub fn k_out(graphs: usize, base_seed: u64) -> Self {
        Self {
            generator: GeneratorConfig::k_out_default(),
            ..Self::scale_free(&[(128, graphs)], base_seed)
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        m.validate()?;
        Ok(m)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Manifest(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Manifest(msg));
        if self.sizes.is_empty() {
            return bad("at least one size is required".into());
        }
        if self.sizes.len() != self.graphs_per_size.len() {
            return bad(format!(
                "{} sizes but {} graph counts",
                self.sizes.len(),
                self.graphs_per_size.len()
            ));
        }
        if let Some(&s) = self.sizes.iter().find(|&&s| s < 11) {
            return bad(format!(
                "size {s} is below 11; top-10 overlap would be trivial"
            ));
        }
        if self.graphs_per_size.contains(&0) {
            return bad("graph counts must be at least 1".into());
        }
        if has_duplicates(&self.sizes) {
            return bad("sizes must be distinct".into());
        }
        if self.methods.is_empty() || has_duplicates(&self.methods) {
            return bad("methods must be a non-empty list without repeats".into());
        }
        if self.modes.is_empty() || has_duplicates(&self.modes) {
            return bad("modes must be a non-empty list without repeats".into());
        }
        if !(0.0..1.0).contains(&self.alpha) {
            return bad(format!("damping factor {} outside [0, 1)", self.alpha));
        }
        self.sizes
            .iter()
            .try_for_each(|&n| self.generator.validate(n))
    }

    fn jobs(&self) -> Vec<(usize, usize, u64)> {
        self.sizes
            .iter()
            .zip(&self.graphs_per_size)
            .flat_map(|(&size, &count)| {
                (0..count).map(move |i| (size, i, derive_seed(self.base_seed, size, i)))
            })
            .collect()
    }
}

fn has_duplicates<T: PartialEq>(v: &[T]) -> bool {
    v.iter().enumerate().any(|(i, a)| v[..i].contains(a))
}

/// Outcome of one (graph, method, mode) comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub size: usize,
    pub index: usize,
    /// Derived seed of this graph slot.
    pub seed: u64,
    /// Seed that produced the connected graph actually used.
    pub seed_used: Option<u64>,
    pub method: QuantumMethod,
    pub mode: Mode,
    pub agreement: Option<AgreementReport>,
    pub error: Option<String>,
}

/// Aggregated means for one (size, method, mode) cell. `mode` is `"hub"`,
/// `"authority"` or `"combined"` (hub and authority runs pooled).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub size: usize,
    pub method: QuantumMethod,
    pub mode: String,
    /// Successful runs included in the means.
    pub n_graphs: usize,
    pub f1_mean: f64,
    pub f10_mean: f64,
    pub tau_mean: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingStats {
    pub total_seconds: f64,
    pub mean_graph_seconds: f64,
    pub max_graph_seconds: f64,
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub manifest: ExperimentManifest,
    pub rows: Vec<SweepRow>,
    /// Sorted by derived seed.
    pub records: Vec<GraphRecord>,
    pub timing: TimingStats,
}

struct GraphOutcome {
    records: Vec<GraphRecord>,
    seconds: f64,
}

fn compare_on_graph(
    g: &DirectedGraph,
    kind: HamiltonianKind,
    method: QuantumMethod,
    mode: Mode,
    alpha: f64,
    baseline: &[f64],
    cache: &mut Option<SpectralDecomposition>,
) -> Result<AgreementReport> {
    if cache.is_none() {
        *cache = Some(eigh(&hamiltonian(g, kind, alpha, mode)?)?);
    }
    let dec = cache.as_ref().expect("just filled");
    let psi0 = initial_state(g, method.parts().1, mode)?;
    let scores = limiting_distribution_from(dec, &psi0)?;
    agreement(&scores.values, baseline)
}

fn process_graph(m: &ExperimentManifest, size: usize, index: usize, seed: u64) -> GraphOutcome {
    let start = Instant::now();
    let generated = m.generator.generate(size, seed).map_err(|e| e.to_string());
    let mut records = Vec::with_capacity(m.modes.len() * m.methods.len());
    for &mode in &m.modes {
        for kind in [HamiltonianKind::Hits, HamiltonianKind::PageRank] {
            let methods: Vec<QuantumMethod> = m
                .methods
                .iter()
                .copied()
                .filter(|q| q.parts().0 == kind)
                .collect();
            if methods.is_empty() {
                continue;
            }
            let baseline = generated.as_ref().map_err(Clone::clone).and_then(|gen| {
                classical_baseline(&gen.graph, kind, mode, m.alpha).map_err(|e| e.to_string())
            });
            let mut cache = None;
            for method in methods {
                let outcome = match (&generated, &baseline) {
                    (Ok(gen), Ok(base)) => {
                        compare_on_graph(&gen.graph, kind, method, mode, m.alpha, base, &mut cache)
                            .map_err(|e| e.to_string())
                    }
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                if let Err(e) = &outcome {
                    log::warn!("size {size} graph {index} {method} {mode}: {e}");
                }
                records.push(GraphRecord {
                    size,
                    index,
                    seed,
                    seed_used: generated.as_ref().ok().map(|g| g.seed_used),
                    method,
                    mode,
                    error: outcome.as_ref().err().cloned(),
                    agreement: outcome.ok(),
                });
            }
        }
    }
    GraphOutcome {
        records,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn aggregate<'a>(
    size: usize,
    method: QuantumMethod,
    mode: String,
    records: impl Iterator<Item = &'a GraphRecord>,
) -> SweepRow {
    let (mut n, mut failures) = (0usize, 0usize);
    let (mut f1, mut f10, mut tau) = (0.0, 0.0, 0.0);
    for r in records {
        match &r.agreement {
            Some(a) => {
                n += 1;
                f1 += a.f1;
                f10 += a.f10;
                tau += a.tau;
            }
            None => failures += 1,
        }
    }
    let mean = |s: f64| if n == 0 { f64::NAN } else { s / n as f64 };
    SweepRow {
        size,
        method,
        mode,
        n_graphs: n,
        f1_mean: mean(f1),
        f10_mean: mean(f10),
        tau_mean: mean(tau),
        failures,
    }
}

/// Runs the sweep on the rayon pool. Results do not depend on the number of
/// threads or on scheduling: records are sorted by derived seed and means
/// are accumulated in that order.
pub fn run_sweep(m: &ExperimentManifest) -> Result<SweepResult> {
    m.validate()?;
    let start = Instant::now();
    let mut outcomes: Vec<(u64, usize, usize, GraphOutcome)> = m
        .jobs()
        .into_par_iter()
        .map(|(size, index, seed)| (seed, size, index, process_graph(m, size, index, seed)))
        .collect();
    outcomes.sort_by_key(|o| (o.0, o.1, o.2));

    let seconds: Vec<f64> = outcomes.iter().map(|o| o.3.seconds).collect();
    let records: Vec<GraphRecord> = outcomes.into_iter().flat_map(|o| o.3.records).collect();

    let mut rows = Vec::new();
    for &size in &m.sizes {
        for &method in &m.methods {
            let of = |mode: Option<Mode>| {
                records.iter().filter(move |r| {
                    r.size == size && r.method == method && mode.is_none_or(|md| r.mode == md)
                })
            };
            for &mode in &m.modes {
                rows.push(aggregate(size, method, mode.to_string(), of(Some(mode))));
            }
            if m.modes.len() > 1 {
                rows.push(aggregate(size, method, "combined".into(), of(None)));
            }
        }
    }

    Ok(SweepResult {
        manifest: m.clone(),
        rows,
        records,
        timing: TimingStats {
            total_seconds: start.elapsed().as_secs_f64(),
            mean_graph_seconds: seconds.iter().sum::<f64>() / seconds.len().max(1) as f64,
            max_graph_seconds: seconds.iter().copied().fold(0.0, f64::max),
            threads: rayon::current_num_threads(),
        },
    })
}

impl SweepResult {
    pub fn row(&self, size: usize, method: QuantumMethod, mode: &str) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.size == size && r.method == method && r.mode == mode)
    }

    pub fn total_failures(&self) -> usize {
        self.records
            .iter()
            .filter(|r| r.agreement.is_none())
            .count()
    }

    /// Aggregate table; contains no timings, so it is byte-stable.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "size", "method", "mode", "n_graphs", "f1_mean", "f10_mean", "tau_mean", "failures",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.size.to_string(),
                r.method.to_string(),
                r.mode.clone(),
                r.n_graphs.to_string(),
                format_sig10(r.f1_mean),
                format_sig10(r.f10_mean),
                format_sig10(r.tau_mean),
                r.failures.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }

    /// Per-graph comparisons, one line per (graph, method, mode).
    pub fn write_records_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "size",
            "index",
            "seed",
            "seed_used",
            "method",
            "mode",
            "f1",
            "f10",
            "tau",
            "error",
        ])?;
        for r in &self.records {
            let metric = |f: fn(&AgreementReport) -> f64| {
                r.agreement
                    .as_ref()
                    .map(|a| format_sig10(f(a)))
                    .unwrap_or_default()
            };
            w.write_record([
                r.size.to_string(),
                r.index.to_string(),
                r.seed.to_string(),
                r.seed_used.map(|s| s.to_string()).unwrap_or_default(),
                r.method.to_string(),
                r.mode.to_string(),
                metric(|a| a.f1),
                metric(|a| a.f10),
                metric(|a| a.tau),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `sweep.csv`, `graphs.csv` and `sweep.json` into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let paths = [
            dir.join("sweep.csv"),
            dir.join("graphs.csv"),
            dir.join("sweep.json"),
        ];
        self.write_csv(fs::File::create(&paths[0])?)?;
        self.write_records_csv(fs::File::create(&paths[1])?)?;
        serde_json::to_writer_pretty(fs::File::create(&paths[2])?, self)?;
        Ok(paths.to_vec())
    }
}
