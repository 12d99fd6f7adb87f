//! Agreement between two rankings of the same node set.
//!
//! All metrics work on the ordering induced by the scores. Scores closer than
//! `1e-9 · max|score|` are treated as ties; ties at the top-1/top-10 boundary
//! are broken by the lowest node index.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, Mode};
use crate::{Error, Result};

/// Relative tolerance for treating two scores as tied.
pub const TIE_RTOL: f64 = 1e-9;

/// Nodes ordered by descending score, with runs of tied scores marked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    order: Vec<usize>,
    groups: Vec<Range<usize>>,
    levels: Vec<usize>,
}

impl Ranking {
    pub fn new(scores: &[f64]) -> Result<Self> {
        Self::with_tolerance(scores, TIE_RTOL)
    }

    /// Ties are formed by chaining: consecutive sorted scores within
    /// `rtol · max|score|` share a group. Inside a group nodes are listed by
    /// ascending index.
    pub fn with_tolerance(scores: &[f64], rtol: f64) -> Result<Self> {
        if let Some(i) = scores.iter().position(|s| !s.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "score of node {} is not finite",
                i + 1
            )));
        }
        let n = scores.len();
        let scale = scores.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
        let tol = rtol * scale;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));

        let mut groups = Vec::new();
        let mut start = 0;
        for p in 1..n {
            if scores[order[p - 1]] - scores[order[p]] > tol {
                groups.push(start..p);
                start = p;
            }
        }
        if n > 0 {
            groups.push(start..n);
        }

        let mut levels = vec![0; n];
        for (level, g) in groups.iter().enumerate() {
            order[g.clone()].sort_unstable();
            for &node in &order[g.clone()] {
                levels[node] = level;
            }
        }
        Ok(Self {
            order,
            groups,
            levels,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 0-based node indices, best first.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// First `k` nodes of the order (fewer if `k > n`).
    pub fn top(&self, k: usize) -> &[usize] {
        &self.order[..k.min(self.order.len())]
    }

    /// Tie groups as lists of 0-based node indices, best group first.
    pub fn tie_groups(&self) -> Vec<Vec<usize>> {
        self.groups
            .iter()
            .map(|g| self.order[g.clone()].to_vec())
            .collect()
    }

    /// Tie-group index of each node (0 = best).
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// 1-based competition rank per node: tied nodes share the best position
    /// of their group.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.len()];
        for g in &self.groups {
            for &node in &self.order[g.clone()] {
                pos[node] = g.start + 1;
            }
        }
        pos
    }
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidParameter("score vectors are empty".into()));
    }
    Ok(())
}

/// Whether both score vectors put the same node first.
pub fn top1_match(x: &[f64], y: &[f64]) -> Result<bool> {
    check_lengths(x, y)?;
    Ok(Ranking::new(x)?.order()[0] == Ranking::new(y)?.order()[0])
}

/// Size of the intersection of the two top-10 sets (top-n when n < 10).
pub fn top10_overlap(x: &[f64], y: &[f64]) -> Result<usize> {
    top_k_overlap(x, y, 10)
}

pub fn top_k_overlap(x: &[f64], y: &[f64], k: usize) -> Result<usize> {
    check_lengths(x, y)?;
    let rx = Ranking::new(x)?;
    let ry = Ranking::new(y)?;
    let mut in_x = vec![false; x.len()];
    for &v in rx.top(k) {
        in_x[v] = true;
    }
    Ok(ry.top(k).iter().filter(|&&v| in_x[v]).count())
}

/// Pair classification over all `n(n−1)/2` node pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PairCounts {
    pub concordant: u64,
    pub discordant: u64,
    /// Tied in `x` but not in `y`.
    pub ties_x_only: u64,
    /// Tied in `y` but not in `x`.
    pub ties_y_only: u64,
    pub ties_both: u64,
}

impl PairCounts {
    /// τ-b; `None` when either side is constant.
    pub fn tau_b(&self) -> Option<f64> {
        let cd = (self.concordant + self.discordant) as f64;
        let denom = ((cd + self.ties_x_only as f64) * (cd + self.ties_y_only as f64)).sqrt();
        if denom == 0.0 {
            None
        } else {
            Some((self.concordant as f64 - self.discordant as f64) / denom)
        }
    }
}

fn ties_within<T: PartialEq>(sorted: impl Iterator<Item = T>) -> u64 {
    let mut total = 0;
    let mut run = 0u64;
    let mut prev: Option<T> = None;
    for v in sorted {
        if prev.as_ref() == Some(&v) {
            run += 1;
        } else {
            total += run * (run.saturating_sub(1)) / 2;
            run = 1;
            prev = Some(v);
        }
    }
    total + run * (run.saturating_sub(1)) / 2
}

/// Counts inversions of `v` by merge sort, sorting it in place.
fn count_inversions(v: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = count_inversions(&mut v[..mid], &mut buf[..mid]);
    swaps += count_inversions(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// O(n log n) pair counting on the tie-group levels of both rankings.
pub fn pair_counts(x: &[f64], y: &[f64]) -> Result<PairCounts> {
    check_lengths(x, y)?;
    let lx = Ranking::new(x)?.levels().to_vec();
    let ly = Ranking::new(y)?.levels().to_vec();
    Ok(pair_counts_of_levels(&lx, &ly))
}

fn pair_counts_of_levels(lx: &[usize], ly: &[usize]) -> PairCounts {
    let n = lx.len() as u64;
    let total = n * n.saturating_sub(1) / 2;

    let mut idx: Vec<usize> = (0..lx.len()).collect();
    idx.sort_unstable_by_key(|&i| (lx[i], ly[i]));
    let tied_x = ties_within(idx.iter().map(|&i| lx[i]));
    let tied_xy = ties_within(idx.iter().map(|&i| (lx[i], ly[i])));

    let mut seq: Vec<usize> = idx.iter().map(|&i| ly[i]).collect();
    let mut buf = vec![0; seq.len()];
    let discordant = count_inversions(&mut seq, &mut buf);
    // seq is now sorted by y level
    let tied_y = ties_within(seq.iter().copied());

    let ties_x_only = tied_x - tied_xy;
    let ties_y_only = tied_y - tied_xy;
    let concordant = total + tied_xy - tied_x - tied_y - discordant;
    PairCounts {
        concordant,
        discordant,
        ties_x_only,
        ties_y_only,
        ties_both: tied_xy,
    }
}

/// Kendall τ-b between two score vectors.
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::InvalidParameter(
            "Kendall tau needs at least two nodes".into(),
        ));
    }
    pair_counts(x, y)?.tau_b().ok_or(Error::UndefinedTau)
}

/// Agreement of a quantum ranking with a classical one. Per graph `f1` is 0
/// or 1 and `f10` a count; aggregated reports hold means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub f1: f64,
    pub f10: f64,
    pub tau: f64,
}

pub fn agreement(x: &[f64], y: &[f64]) -> Result<AgreementReport> {
    Ok(AgreementReport {
        f1: if top1_match(x, y)? { 1.0 } else { 0.0 },
        f10: top10_overlap(x, y)? as f64,
        tau: kendall_tau(x, y)?,
    })
}

/// Nodes with zero relevant degree (out-degree for hubs, in-degree for
/// authorities) that are ranked strictly above some node with positive
/// degree. A sensible ranking leaves this empty.
pub fn zero_degree_inversions(g: &DirectedGraph, scores: &[f64], mode: Mode) -> Result<Vec<usize>> {
    if scores.len() != g.node_count() {
        return Err(Error::LengthMismatch {
            left: g.node_count(),
            right: scores.len(),
        });
    }
    let degrees = g.degrees(mode.degree_kind()).values;
    let ranking = Ranking::new(scores)?;
    let levels = ranking.levels();
    let worst_positive = (0..scores.len())
        .filter(|&v| degrees[v] > 0)
        .map(|v| levels[v])
        .max();
    let Some(worst) = worst_positive else {
        return Ok(Vec::new());
    };
    Ok((0..scores.len())
        .filter(|&v| degrees[v] == 0 && levels[v] < worst)
        .collect())
}
