//! Classical HITS and PageRank / Reverse PageRank.
//!
//! These are the baselines the quantum rankings are compared against, and
//! their Google matrix is reused to build the PageRank-derived Hamiltonian.

use serde::{Deserialize, Serialize};

use crate::graph::{DirectedGraph, Mode};
use crate::linalg::{diff_norm1, diff_norm2, norm1, norm2, Matrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    TwoNorm,
    OneNorm,
}

/// Nonnegative per-node scores with a declared unit norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreVector {
    pub values: Vec<f64>,
    pub normalization: Normalization,
    pub mode: Mode,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        match self.normalization {
            Normalization::TwoNorm => norm2(&self.values),
            Normalization::OneNorm => norm1(&self.values),
        }
    }
}

impl AsRef<[f64]> for ScoreVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// HITS authority and hub vectors, both unit 2-norm.
#[derive(Debug, Clone)]
pub struct HitsScores {
    pub authority: ScoreVector,
    pub hub: ScoreVector,
    pub iterations: usize,
}

impl HitsScores {
    pub fn for_mode(&self, mode: Mode) -> &ScoreVector {
        match mode {
            Mode::Hub => &self.hub,
            Mode::Authority => &self.authority,
        }
    }

    pub fn into_mode(self, mode: Mode) -> ScoreVector {
        match mode {
            Mode::Hub => self.hub,
            Mode::Authority => self.authority,
        }
    }
}

/// HITS by alternating power iteration from the uniform vector `1/√n`.
///
/// Each sweep computes `x ← normalize(Aᵀy)`, `y ← normalize(Ax)`. The
/// iteration stops once the successive 2-norm change, scaled by the current
/// estimate of the dominant eigenvalue `‖AAᵀy‖`, falls below `tol`, so the
/// eigen-residual of the returned vectors is of order `tol`. A change at the
/// level of rounding noise also stops the iteration.
pub fn hits(g: &DirectedGraph, tol: f64, max_iter: usize) -> Result<HitsScores> {
    if g.edge_count() == 0 {
        return Err(Error::DegenerateInput(
            "HITS needs at least one edge".into(),
        ));
    }
    let n = g.node_count();
    let start = 1.0 / (n as f64).sqrt();
    let mut hub = vec![start; n];
    let mut authority = vec![start; n];
    let noise_floor = 16.0 * f64::EPSILON * (n as f64).sqrt();

    let mut change = f64::INFINITY;
    for iter in 1..=max_iter {
        // x = Aᵀ y
        let mut next_auth = vec![0.0; n];
        for &(i, j) in g.edges() {
            next_auth[j] += hub[i];
        }
        let auth_norm = norm2(&next_auth);
        next_auth.iter_mut().for_each(|v| *v /= auth_norm);

        // y = A x
        let mut next_hub = vec![0.0; n];
        for &(i, j) in g.edges() {
            next_hub[i] += next_auth[j];
        }
        let hub_norm = norm2(&next_hub);
        next_hub.iter_mut().for_each(|v| *v /= hub_norm);

        change = diff_norm2(&next_auth, &authority).max(diff_norm2(&next_hub, &hub));
        authority = next_auth;
        hub = next_hub;

        // auth_norm · hub_norm = ‖AAᵀy‖ for the previous hub vector
        let scale = (auth_norm * hub_norm).max(1.0);
        if change * scale < tol || change <= noise_floor {
            return Ok(HitsScores {
                authority: ScoreVector {
                    values: authority,
                    normalization: Normalization::TwoNorm,
                    mode: Mode::Authority,
                },
                hub: ScoreVector {
                    values: hub,
                    normalization: Normalization::TwoNorm,
                    mode: Mode::Hub,
                },
                iterations: iter,
            });
        }
    }
    Err(Error::Convergence {
        algorithm: "HITS",
        iterations: max_iter,
        residual: change,
    })
}

/// Dense row-stochastic Google matrix `G = αÃ + (1−α)/n·11ᵀ`.
#[derive(Debug, Clone)]
pub struct GoogleMatrix {
    matrix: Matrix,
    pub alpha: f64,
    pub mode: Mode,
}

impl GoogleMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Largest `|Σ_j G[i][j] − 1|` over rows.
    pub fn max_row_sum_error(&self) -> f64 {
        (0..self.dim())
            .map(|i| (self.matrix.row(i).iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Builds `G` (authority mode, from `A`) or `G_h` (hub mode, from `Aᵀ`).
///
/// Rows of dangling nodes in the patched matrix `Ã` are uniform `1/n`.
/// Note that `G_h` is not `Gᵀ`.
pub fn google_matrix(g: &DirectedGraph, alpha: f64, mode: Mode) -> Result<GoogleMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "damping factor {alpha} outside [0, 1]"
        )));
    }
    let n = g.node_count();
    let nf = n as f64;
    let teleport = (1.0 - alpha) / nf;
    let mut matrix = Matrix::zeros(n, n);
    for i in 0..n {
        let targets = match mode {
            Mode::Authority => g.successors(i),
            Mode::Hub => g.predecessors(i),
        };
        let row = matrix.row_mut(i);
        if targets.is_empty() {
            row.iter_mut().for_each(|v| *v = alpha / nf + teleport);
        } else {
            row.iter_mut().for_each(|v| *v = teleport);
            let w = alpha / targets.len() as f64;
            for &j in targets {
                row[j] += w;
            }
        }
    }
    Ok(GoogleMatrix {
        matrix,
        alpha,
        mode,
    })
}

/// PageRank (authority mode) or Reverse PageRank (hub mode).
///
/// Power iteration `x ← Gᵀx` from the uniform distribution; stops when the
/// 1-norm change drops below `tol`. The result is the positive,
/// 1-norm-normalized stationary vector.
pub fn pagerank(
    g: &DirectedGraph,
    alpha: f64,
    mode: Mode,
    tol: f64,
    max_iter: usize,
) -> Result<ScoreVector> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "PageRank damping factor {alpha} outside [0, 1)"
        )));
    }
    let google = google_matrix(g, alpha, mode)?;
    let n = google.dim();
    let mut x = vec![1.0 / n as f64; n];
    let mut change = f64::INFINITY;
    for _ in 0..max_iter {
        let mut next = google.matrix().transpose_matvec(&x);
        let s = norm1(&next);
        next.iter_mut().for_each(|v| *v /= s);
        change = diff_norm1(&next, &x);
        x = next;
        if change < tol {
            return Ok(ScoreVector {
                values: x,
                normalization: Normalization::OneNorm,
                mode,
            });
        }
    }
    Err(Error::Convergence {
        algorithm: "PageRank",
        iterations: max_iter,
        residual: change,
    })
}

/// `‖Gᵀx − x‖₁`.
pub fn pagerank_residual(google: &GoogleMatrix, x: &[f64]) -> f64 {
    diff_norm1(&google.matrix().transpose_matvec(x), x)
}

/// Eigen-residual `‖Mv − ρv‖₂` of a HITS vector, with `M = AAᵀ` for hubs,
/// `M = AᵀA` for authorities and `ρ = vᵀMv`.
pub fn hits_residual(g: &DirectedGraph, v: &[f64], mode: Mode) -> f64 {
    let a = g.adjacency();
    let mv = match mode {
        Mode::Hub => a.matvec(&a.transpose_matvec(v)),
        Mode::Authority => a.transpose_matvec(&a.matvec(v)),
    };
    let rho: f64 = v.iter().zip(&mv).map(|(x, y)| x * y).sum();
    mv.iter()
        .zip(v)
        .map(|(m, x)| (m - rho * x).powi(2))
        .sum::<f64>()
        .sqrt()
}
