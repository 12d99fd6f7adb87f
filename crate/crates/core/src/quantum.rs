//! Quantum-walk centrality: Hamiltonians, initial states and the
//! infinite-time average of node occupations.
//!
//! For a time-independent Hamiltonian `H = Σ θ_k φ_k φ_kᵀ` and initial state
//! `ψ₀ = Σ a_k φ_k`, the time average of `|⟨j|e^{−iHt}|ψ₀⟩|²` converges to
//!
//! ```text
//! C_j = Σ_{groups P} ( Σ_{k ∈ P} a_k φ_k[j] )²
//! ```
//!
//! where the groups collect equal eigenvalues. Both Hamiltonians are real
//! symmetric and both initial states are real, so no complex arithmetic is
//! needed for `C`. Only [`evolve_occupations`] and
//! [`time_average_occupations`] track phases.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classical::google_matrix;
use crate::graph::{DirectedGraph, Mode};
use crate::linalg::Matrix;
use crate::spectral::{eigh, SpectralDecomposition, SymmetricMatrix};
use crate::{Error, Result, DEFAULT_ALPHA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianKind {
    /// `H_H = ÃᵀÃ` with `Ã = αA + (1−α)/n·11ᵀ`.
    Hits,
    /// `H_G = (I−G)(I−G)ᵀ` with the Google matrix `G`.
    PageRank,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialStateKind {
    Uniform,
    /// Occupation proportional to in-degree (authority) or out-degree (hub).
    Weighted,
}

/// One of the four quantum ranking methods, plus mode and damping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub hamiltonian: HamiltonianKind,
    pub initial: InitialStateKind,
    pub mode: Mode,
    pub alpha: f64,
}

/// The named quantum methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String")]
pub enum QuantumMethod {
    #[serde(rename = "CQHITSu")]
    CqHitsU,
    #[serde(rename = "CQHITSw")]
    CqHitsW,
    #[serde(rename = "CQPRu")]
    CqPrU,
    #[serde(rename = "CQPRw")]
    CqPrW,
}

impl QuantumMethod {
    pub const ALL: [QuantumMethod; 4] = [
        QuantumMethod::CqHitsU,
        QuantumMethod::CqHitsW,
        QuantumMethod::CqPrU,
        QuantumMethod::CqPrW,
    ];

    pub fn parts(self) -> (HamiltonianKind, InitialStateKind) {
        use HamiltonianKind::*;
        use InitialStateKind::*;
        match self {
            QuantumMethod::CqHitsU => (Hits, Uniform),
            QuantumMethod::CqHitsW => (Hits, Weighted),
            QuantumMethod::CqPrU => (PageRank, Uniform),
            QuantumMethod::CqPrW => (PageRank, Weighted),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuantumMethod::CqHitsU => "CQHITSu",
            QuantumMethod::CqHitsW => "CQHITSw",
            QuantumMethod::CqPrU => "CQPRu",
            QuantumMethod::CqPrW => "CQPRw",
        }
    }

    pub fn spec(self, mode: Mode, alpha: f64) -> MethodSpec {
        let (hamiltonian, initial) = self.parts();
        MethodSpec {
            hamiltonian,
            initial,
            mode,
            alpha,
        }
    }
}

impl fmt::Display for QuantumMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl TryFrom<String> for QuantumMethod {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for QuantumMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cqhitsu" => Ok(QuantumMethod::CqHitsU),
            "cqhitsw" => Ok(QuantumMethod::CqHitsW),
            "cqpru" => Ok(QuantumMethod::CqPrU),
            "cqprw" => Ok(QuantumMethod::CqPrW),
            other => Err(Error::InvalidParameter(format!(
                "unknown quantum method '{other}'"
            ))),
        }
    }
}

impl MethodSpec {
    pub fn new(method: QuantumMethod, mode: Mode) -> Self {
        method.spec(mode, DEFAULT_ALPHA)
    }

    pub fn method(&self) -> QuantumMethod {
        use HamiltonianKind::*;
        use InitialStateKind::*;
        match (self.hamiltonian, self.initial) {
            (Hits, Uniform) => QuantumMethod::CqHitsU,
            (Hits, Weighted) => QuantumMethod::CqHitsW,
            (PageRank, Uniform) => QuantumMethod::CqPrU,
            (PageRank, Weighted) => QuantumMethod::CqPrW,
        }
    }

    pub fn with_mode(self, mode: Mode) -> Self {
        Self { mode, ..self }
    }
}

/// Real, unit-norm initial amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumState {
    amplitudes: Vec<f64>,
}

impl QuantumState {
    /// Normalizes `amplitudes` to unit 2-norm.
    pub fn new(mut amplitudes: Vec<f64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::DegenerateInput(
                "state has zero or non-finite norm".into(),
            ));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { amplitudes })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Occupation probabilities `a_j²`.
    pub fn occupations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }
}

/// Time-averaged occupation probabilities; these are the centrality scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitingDistribution {
    pub values: Vec<f64>,
    pub method: Option<MethodSpec>,
}

impl LimitingDistribution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

impl AsRef<[f64]> for LimitingDistribution {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

/// `ÃᵀÃ` (authority) or `ÃÃᵀ` (hub) with the rank-one corrected adjacency
/// `Ã = αA + (1−α)/n·11ᵀ`.
pub fn hamiltonian_hits(g: &DirectedGraph, alpha: f64, mode: Mode) -> Result<SymmetricMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "damping factor {alpha} outside [0, 1]"
        )));
    }
    let n = g.node_count();
    let mut patched = Matrix::filled(n, n, (1.0 - alpha) / n as f64);
    for &(i, j) in g.edges() {
        patched[(i, j)] += alpha;
    }
    let h = match mode {
        Mode::Authority => patched.transpose_matmul(&patched),
        Mode::Hub => patched.matmul_transpose(&patched),
    };
    SymmetricMatrix::new(h)
}

/// `(I−G)(I−G)ᵀ` with `G` the authority Google matrix, or `G_h` for hubs.
pub fn hamiltonian_pr(g: &DirectedGraph, alpha: f64, mode: Mode) -> Result<SymmetricMatrix> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::InvalidParameter(format!(
            "damping factor {alpha} outside [0, 1)"
        )));
    }
    let mut m = google_matrix(g, alpha, mode)?.into_matrix();
    m.scale(-1.0);
    m.add_diagonal(1.0);
    SymmetricMatrix::new(m.matmul_transpose(&m))
}

pub fn hamiltonian(
    g: &DirectedGraph,
    kind: HamiltonianKind,
    alpha: f64,
    mode: Mode,
) -> Result<SymmetricMatrix> {
    match kind {
        HamiltonianKind::Hits => hamiltonian_hits(g, alpha, mode),
        HamiltonianKind::PageRank => hamiltonian_pr(g, alpha, mode),
    }
}

/// Uniform state `1/√n`, or amplitudes `√(deg(k)/Σdeg)`.
pub fn initial_state(
    g: &DirectedGraph,
    kind: InitialStateKind,
    mode: Mode,
) -> Result<QuantumState> {
    let n = g.node_count();
    match kind {
        InitialStateKind::Uniform => Ok(QuantumState {
            amplitudes: vec![1.0 / (n as f64).sqrt(); n],
        }),
        InitialStateKind::Weighted => {
            let degrees = g.degrees(mode.degree_kind());
            let total = degrees.total();
            if total == 0 {
                return Err(Error::DegenerateInput(
                    "weighted initial state needs at least one edge".into(),
                ));
            }
            let total = total as f64;
            Ok(QuantumState {
                amplitudes: degrees
                    .values
                    .iter()
                    .map(|&d| (d as f64 / total).sqrt())
                    .collect(),
            })
        }
    }
}

/// Overlaps `a_k = φ_kᵀψ₀` in eigenvalue order.
pub fn overlaps(decomposition: &SpectralDecomposition, psi0: &QuantumState) -> Vec<f64> {
    decomposition
        .eigenvectors()
        .transpose_matvec(psi0.amplitudes())
}

fn check_dims(decomposition: &SpectralDecomposition, psi0: &QuantumState) -> Result<()> {
    if decomposition.dim() != psi0.dim() {
        return Err(Error::LengthMismatch {
            left: decomposition.dim(),
            right: psi0.dim(),
        });
    }
    Ok(())
}

/// Closed-form limiting distribution for an already decomposed Hamiltonian.
///
/// Invariant under any orthonormal change of basis inside a degeneracy group.
pub fn limiting_distribution_from(
    decomposition: &SpectralDecomposition,
    psi0: &QuantumState,
) -> Result<LimitingDistribution> {
    check_dims(decomposition, psi0)?;
    let n = decomposition.dim();
    let a = overlaps(decomposition, psi0);
    let phi = decomposition.eigenvectors();
    let mut c = vec![0.0; n];
    let mut projection = vec![0.0; n];
    for group in decomposition.groups() {
        projection.iter_mut().for_each(|p| *p = 0.0);
        for k in group.clone() {
            if a[k] == 0.0 {
                continue;
            }
            for (j, p) in projection.iter_mut().enumerate() {
                *p += a[k] * phi[(j, k)];
            }
        }
        for (cj, p) in c.iter_mut().zip(&projection) {
            *cj += p * p;
        }
    }
    Ok(LimitingDistribution {
        values: c,
        method: None,
    })
}

pub fn limiting_distribution(
    h: &SymmetricMatrix,
    psi0: &QuantumState,
) -> Result<LimitingDistribution> {
    limiting_distribution_from(&eigh(h)?, psi0)
}

/// Runs one quantum method on `g`.
pub fn rank(g: &DirectedGraph, spec: &MethodSpec) -> Result<LimitingDistribution> {
    if !g.is_weakly_connected() {
        log::warn!("ranking a graph that is not weakly connected");
    }
    let h = hamiltonian(g, spec.hamiltonian, spec.alpha, spec.mode)?;
    let psi0 = initial_state(g, spec.initial, spec.mode)?;
    let mut dist = limiting_distribution(&h, &psi0)?;
    dist.method = Some(*spec);
    Ok(dist)
}

/// Occupations `|⟨j|e^{−iHt}|ψ₀⟩|²` at each requested time.
pub fn evolve_occupations(
    h: &SymmetricMatrix,
    psi0: &QuantumState,
    times: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let dec = eigh(h)?;
    evolve_occupations_from(&dec, psi0, times)
}

pub fn evolve_occupations_from(
    decomposition: &SpectralDecomposition,
    psi0: &QuantumState,
    times: &[f64],
) -> Result<Vec<Vec<f64>>> {
    check_dims(decomposition, psi0)?;
    if let Some(t) = times.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
        return Err(Error::InvalidParameter(format!(
            "time {t} must be finite and >= 0"
        )));
    }
    let a = overlaps(decomposition, psi0);
    let theta = decomposition.eigenvalues();
    let mut weights = vec![Complex64::new(0.0, 0.0); a.len()];
    Ok(times
        .iter()
        .map(|&t| {
            for (w, (&ak, &th)) in weights.iter_mut().zip(a.iter().zip(theta)) {
                *w = Complex64::from_polar(ak, -th * t);
            }
            occupations_at(decomposition.eigenvectors(), &weights)
        })
        .collect())
}

fn occupations_at(phi: &Matrix, weights: &[Complex64]) -> Vec<f64> {
    (0..phi.rows())
        .map(|j| {
            let amp: Complex64 = phi.row(j).iter().zip(weights).map(|(&p, w)| w * p).sum();
            amp.norm_sqr()
        })
        .collect()
}

/// Mean occupation over `[0, horizon]` sampled at `samples` midpoints
/// `t_s = (s + ½)·horizon/samples`.
///
/// Phases are advanced by multiplication and re-synchronized from the exact
/// exponential every 4096 steps.
pub fn time_average_occupations(
    decomposition: &SpectralDecomposition,
    psi0: &QuantumState,
    horizon: f64,
    samples: usize,
) -> Result<Vec<f64>> {
    check_dims(decomposition, psi0)?;
    if !(horizon.is_finite() && horizon > 0.0) || samples == 0 {
        return Err(Error::InvalidParameter(
            "time average needs a positive horizon and at least one sample".into(),
        ));
    }
    const RESYNC: usize = 4096;
    let a = overlaps(decomposition, psi0);
    let theta = decomposition.eigenvalues();
    let phi = decomposition.eigenvectors();
    let n = a.len();
    let dt = horizon / samples as f64;
    let step: Vec<Complex64> = theta
        .iter()
        .map(|&th| Complex64::from_polar(1.0, -th * dt))
        .collect();
    let exact = |s: usize| -> Vec<Complex64> {
        let t = (s as f64 + 0.5) * dt;
        a.iter()
            .zip(theta)
            .map(|(&ak, &th)| Complex64::from_polar(ak, -th * t))
            .collect()
    };

    let mut weights = exact(0);
    let mut sum = vec![0.0; n];
    for s in 0..samples {
        if s > 0 {
            if s % RESYNC == 0 {
                weights = exact(s);
            } else {
                weights.iter_mut().zip(&step).for_each(|(w, st)| *w *= st);
            }
        }
        for (j, acc) in sum.iter_mut().enumerate() {
            let amp: Complex64 = phi.row(j).iter().zip(&weights).map(|(&p, w)| w * p).sum();
            *acc += amp.norm_sqr();
        }
    }
    let inv = 1.0 / samples as f64;
    sum.iter_mut().for_each(|v| *v *= inv);
    Ok(sum)
}

/// Squared overlaps `|a_j|²` of the initial state with each eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapSpectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub overlaps: Vec<f64>,
}

pub fn overlap_spectrum_from(
    decomposition: &SpectralDecomposition,
    psi0: &QuantumState,
) -> Result<OverlapSpectrum> {
    check_dims(decomposition, psi0)?;
    Ok(OverlapSpectrum {
        eigenvalues: decomposition.eigenvalues().to_vec(),
        overlaps: overlaps(decomposition, psi0)
            .iter()
            .map(|a| a * a)
            .collect(),
    })
}

pub fn overlap_spectrum(h: &SymmetricMatrix, psi0: &QuantumState) -> Result<OverlapSpectrum> {
    overlap_spectrum_from(&eigh(h)?, psi0)
}
