//! Seeded random directed graphs.
//!
//! Both generators draw from `ChaCha8Rng::seed_from_u64(seed)`, so the edge
//! set is a pure function of the parameters and the seed on every platform.
//! Raw multigraph output is reduced to a simple graph (self-loops dropped,
//! parallel edges collapsed). If the result is not weakly connected the draw
//! is repeated with `seed + REGENERATION_STRIDE`, up to
//! [`MAX_GENERATION_ATTEMPTS`] times.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::DirectedGraph;
use crate::{Error, Result};

pub const MAX_GENERATION_ATTEMPTS: usize = 100;
pub const REGENERATION_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;

/// Directed preferential attachment (Bollobás–Borgs–Chayes–Riordan).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFreeParams {
    pub n: usize,
    /// Probability of adding a new node with an edge to an existing node.
    pub alpha: f64,
    /// Probability of adding an edge between two existing nodes.
    pub beta: f64,
    /// Probability of adding a new node with an edge from an existing node.
    pub gamma: f64,
    pub delta_in: f64,
    pub delta_out: f64,
    pub seed: u64,
}

impl ScaleFreeParams {
    /// The usual model defaults `(α, β, γ, δ_in, δ_out) = (0.41, 0.54, 0.05, 0.2, 0)`.
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            alpha: 0.41,
            beta: 0.54,
            gamma: 0.05,
            delta_in: 0.2,
            delta_out: 0.0,
            seed,
        }
    }

    /// Growth-dominated variant `(α, β, γ) = (0.557, 0.136, 0.307)`.
    pub fn growth_heavy(n: usize, seed: u64) -> Self {
        Self {
            alpha: 0.557,
            beta: 0.136,
            gamma: 0.307,
            ..Self::new(n, seed)
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let probs = [self.alpha, self.beta, self.gamma];
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::InvalidParameter(
                "scale-free probabilities must be >= 0".into(),
            ));
        }
        if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(
                "scale-free probabilities must sum to 1".into(),
            ));
        }
        if self.alpha + self.gamma <= 0.0 {
            return Err(Error::InvalidParameter(
                "alpha + gamma must be positive or the graph never grows".into(),
            ));
        }
        if !(self.delta_in >= 0.0 && self.delta_out >= 0.0) {
            return Err(Error::InvalidParameter(
                "attachment offsets must be >= 0".into(),
            ));
        }
        if self.n < 3 {
            return Err(Error::InvalidParameter(
                "scale-free graphs start from a 3-cycle and need n >= 3".into(),
            ));
        }
        Ok(())
    }

    /// File stem encoding every parameter.
    pub fn label(&self) -> String {
        format!(
            "scale_free_n{}_a{}_b{}_g{}_din{}_dout{}_s{}",
            self.n, self.alpha, self.beta, self.gamma, self.delta_in, self.delta_out, self.seed
        )
    }
}

/// Random k-out digraph with preferential choice of targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KOutParams {
    pub n: usize,
    pub k: usize,
    /// Base attachment weight; targets are chosen ∝ `alpha_w + in-degree`.
    pub alpha_w: f64,
    pub seed: u64,
}

impl KOutParams {
    pub fn new(n: usize, k: usize, alpha_w: f64, seed: u64) -> Self {
        Self {
            n,
            k,
            alpha_w,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 || self.k >= self.n {
            return Err(Error::InvalidParameter(format!(
                "k-out needs 1 <= k < n, got k={} n={}",
                self.k, self.n
            )));
        }
        if !(self.alpha_w.is_finite() && self.alpha_w > 0.0) {
            return Err(Error::InvalidParameter(
                "k-out attachment weight must be > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        format!(
            "k_out_n{}_k{}_a{}_s{}",
            self.n, self.k, self.alpha_w, self.seed
        )
    }
}

fn choose_node(rng: &mut ChaCha8Rng, candidates: &[usize], node_count: usize, delta: f64) -> usize {
    if delta > 0.0 {
        let bias = node_count as f64 * delta;
        let p_uniform = bias / (bias + candidates.len() as f64);
        if rng.gen::<f64>() < p_uniform {
            return rng.gen_range(0..node_count);
        }
    }
    candidates[rng.gen_range(0..candidates.len())]
}

/// One draw of the scale-free process; may be disconnected.
///
/// Starts from the directed 3-cycle. Each step picks, with probabilities
/// `alpha`/`beta`/`gamma`: a new node pointing to an existing one chosen
/// ∝ `in-degree + delta_in`; an edge between existing nodes with source
/// ∝ `out-degree + delta_out` and target ∝ `in-degree + delta_in`; or a new
/// node pointed to by an existing one chosen ∝ `out-degree + delta_out`.
pub fn scale_free_once(p: &ScaleFreeParams) -> Result<DirectedGraph> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    // one entry per edge endpoint: sampling uniformly from these is
    // sampling ∝ degree
    let mut sources = vec![0, 1, 2];
    let mut targets = vec![1, 2, 0];
    let mut node_count = 3;

    while node_count < p.n {
        let r: f64 = rng.gen();
        let (v, w) = if r < p.alpha {
            let v = node_count;
            node_count += 1;
            (v, choose_node(&mut rng, &targets, node_count, p.delta_in))
        } else if r < p.alpha + p.beta {
            let v = choose_node(&mut rng, &sources, node_count, p.delta_out);
            let w = choose_node(&mut rng, &targets, node_count, p.delta_in);
            (v, w)
        } else {
            let v = choose_node(&mut rng, &sources, node_count, p.delta_out);
            let w = node_count;
            node_count += 1;
            (v, w)
        };
        sources.push(v);
        targets.push(w);
    }

    DirectedGraph::from_edges(
        node_count,
        sources.into_iter().zip(targets).filter(|(v, w)| v != w),
    )
}

/// One draw of the k-out process; may be disconnected.
///
/// Edges are added one at a time: the source is uniform among nodes that
/// still have fewer than `k` out-edges, and the target is drawn ∝
/// `alpha_w + in-degree` among nodes that are neither the source nor already
/// one of its targets. Every node ends with out-degree exactly `k`.
pub fn k_out_once(p: &KOutParams) -> Result<DirectedGraph> {
    p.validate()?;
    let n = p.n;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut in_degree = vec![0usize; n];
    let mut taken = vec![false; n * n];
    let mut open: Vec<usize> = (0..n).collect();
    let mut out_degree = vec![0usize; n];
    let mut edges = Vec::with_capacity(n * p.k);

    while !open.is_empty() {
        let slot = rng.gen_range(0..open.len());
        let u = open[slot];
        let eligible = |v: usize| v != u && !taken[u * n + v];

        let total: f64 = (0..n)
            .filter(|&v| eligible(v))
            .map(|v| p.alpha_w + in_degree[v] as f64)
            .sum();
        let mut r = rng.gen::<f64>() * total;
        let mut target = None;
        for v in (0..n).filter(|&v| eligible(v)) {
            target = Some(v);
            r -= p.alpha_w + in_degree[v] as f64;
            if r < 0.0 {
                break;
            }
        }
        let v = target.expect("k < n leaves at least one eligible target");

        taken[u * n + v] = true;
        in_degree[v] += 1;
        out_degree[u] += 1;
        edges.push((u, v));
        if out_degree[u] == p.k {
            open.remove(slot);
        }
    }
    DirectedGraph::from_edges(n, edges)
}

fn regenerate_until_connected<P>(
    params: &P,
    seed: u64,
    with_seed: impl Fn(&P, u64) -> P,
    draw: impl Fn(&P) -> Result<DirectedGraph>,
) -> Result<Generated> {
    let mut s = seed;
    for attempt in 1..=MAX_GENERATION_ATTEMPTS {
        let graph = draw(&with_seed(params, s))?;
        if graph.is_weakly_connected() {
            return Ok(Generated {
                graph,
                seed_used: s,
                attempts: attempt,
            });
        }
        s = s.wrapping_add(REGENERATION_STRIDE);
    }
    Err(Error::InvalidGraph(format!(
        "no weakly connected graph after {MAX_GENERATION_ATTEMPTS} attempts from seed {seed}"
    )))
}

/// A generated graph and the seed that produced it.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: DirectedGraph,
    pub seed_used: u64,
    pub attempts: usize,
}

/// Weakly connected scale-free graph.
pub fn scale_free(p: &ScaleFreeParams) -> Result<Generated> {
    regenerate_until_connected(p, p.seed, |p, s| p.with_seed(s), scale_free_once)
}

/// Weakly connected k-out graph.
pub fn k_out(p: &KOutParams) -> Result<Generated> {
    regenerate_until_connected(p, p.seed, |p, s| p.with_seed(s), k_out_once)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-graph seed `base ⊕ hash(size, index)`; independent of scheduling.
pub fn derive_seed(base: u64, size: usize, index: usize) -> u64 {
    base ^ splitmix64(splitmix64(size as u64) ^ index as u64)
}
