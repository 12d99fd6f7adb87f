//! Continuous-time quantum walk (CTQW) centrality for directed graphs.
//!
//! Four quantum ranking methods are built from symmetric reformulations of
//! HITS and PageRank:
//!
//! | method    | Hamiltonian              | initial state   |
//! |-----------|--------------------------|-----------------|
//! | CQHITSu   | `ÃᵀÃ` (rank-one patched) | uniform         |
//! | CQHITSw   | `ÃᵀÃ`                    | degree-weighted |
//! | CQPRu     | `(I−G)(I−G)ᵀ`            | uniform         |
//! | CQPRw     | `(I−G)(I−G)ᵀ`            | degree-weighted |
//!
//! The score of a node is the infinite-time average of its occupation
//! probability, evaluated in closed form from the Hamiltonian's spectral
//! decomposition (sums over degenerate eigenvalue groups).
//!
//! The crate also ships the classical baselines, seeded graph generators,
//! ranking-agreement metrics and the experiment harness used to compare
//! quantum and classical rankings.

pub mod classical;
mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod linalg;
pub mod metrics;
pub mod quantum;
pub mod spectral;

pub use classical::{google_matrix, hits, pagerank, GoogleMatrix, Normalization, ScoreVector};
pub use error::{Error, Result};
pub use graph::{DegreeKind, DegreeVector, DirectedGraph, Mode};
pub use metrics::{kendall_tau, top10_overlap, top1_match, AgreementReport, Ranking};
pub use quantum::{
    limiting_distribution, rank, HamiltonianKind, InitialStateKind, LimitingDistribution,
    MethodSpec, QuantumState,
};
pub use spectral::{eigh, group_degenerate, SpectralDecomposition, SymmetricMatrix};

/// Default damping factor for both Hamiltonians and PageRank.
pub const DEFAULT_ALPHA: f64 = 0.85;
/// Default stopping tolerance for the classical power iterations.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration cap for the classical power iterations.
pub const DEFAULT_MAX_ITER: usize = 100_000;
