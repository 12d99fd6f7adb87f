//! Spectral diagnostics: eigenvalues, initial-state overlaps and the
//! eigenvectors that carry most of the weight, as plot-ready CSV.

use std::io::Write;

use serde::Serialize;

use super::format_sig10;
use crate::graph::DirectedGraph;
use crate::quantum::{
    hamiltonian, initial_state, limiting_distribution_from, overlaps, MethodSpec,
};
use crate::spectral::eigh;
use crate::Result;

/// `|a_j|²` at or below this counts as a numerically zero overlap.
pub const ZERO_OVERLAP_TOL: f64 = 1e-20;

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub spec: MethodSpec,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `|a_j|²` for each eigenvector.
    pub overlaps: Vec<f64>,
    /// Degeneracy group of each eigenvalue.
    pub group: Vec<usize>,
    /// 0-based eigen indices of the exported eigenvectors, ascending.
    pub selected: Vec<usize>,
    /// `eigenvectors[s][node]` for each selected index.
    pub eigenvectors: Vec<Vec<f64>>,
    pub scores: Vec<f64>,
}

impl Diagnostics {
    pub fn overlap_total(&self) -> f64 {
        self.overlaps.iter().sum()
    }

    pub fn zero_overlap_count(&self) -> usize {
        self.overlaps
            .iter()
            .filter(|&&a| a <= ZERO_OVERLAP_TOL)
            .count()
    }

    /// Index of the largest overlap (lowest index on ties).
    pub fn dominant(&self) -> usize {
        top_indices(&self.overlaps, 1)[0]
    }

    /// Columns `j, theta, overlap, group` (1-based `j` and group).
    pub fn write_spectrum_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["j", "theta", "overlap", "group"])?;
        for (j, (theta, a2)) in self.eigenvalues.iter().zip(&self.overlaps).enumerate() {
            w.write_record([
                (j + 1).to_string(),
                format_sig10(*theta),
                format_sig10(*a2),
                (self.group[j] + 1).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Columns `node, score, v<j>...` for the selected eigenvectors.
    pub fn write_eigenvectors_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["node".to_string(), "score".to_string()];
        header.extend(self.selected.iter().map(|j| format!("v{}", j + 1)));
        w.write_record(&header)?;
        for node in 0..self.scores.len() {
            let mut row = vec![(node + 1).to_string(), format_sig10(self.scores[node])];
            row.extend(self.eigenvectors.iter().map(|v| format_sig10(v[node])));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn top_indices(values: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Decomposes the method's Hamiltonian and exports the `select` eigenvectors
/// with the largest overlaps.
pub fn run_diagnostics(g: &DirectedGraph, spec: &MethodSpec, select: usize) -> Result<Diagnostics> {
    let dec = eigh(&hamiltonian(g, spec.hamiltonian, spec.alpha, spec.mode)?)?;
    let psi0 = initial_state(g, spec.initial, spec.mode)?;
    let overlaps: Vec<f64> = overlaps(&dec, &psi0).iter().map(|a| a * a).collect();
    let mut group = vec![0; dec.dim()];
    for (k, range) in dec.groups().iter().enumerate() {
        group[range.clone()].iter_mut().for_each(|v| *v = k);
    }
    let mut selected = top_indices(&overlaps, select.min(dec.dim()));
    selected.sort_unstable();
    let scores = limiting_distribution_from(&dec, &psi0)?;
    Ok(Diagnostics {
        spec: *spec,
        eigenvalues: dec.eigenvalues().to_vec(),
        eigenvectors: selected.iter().map(|&j| dec.eigenvector(j)).collect(),
        selected,
        overlaps,
        group,
        scores: scores.values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::small_graphs::{diamond_graph, star_graph};
    use crate::graph::Mode;
    use crate::quantum::QuantumMethod;

    #[test]
    fn overlaps_sum_to_one() {
        for method in QuantumMethod::ALL {
            for mode in Mode::BOTH {
                let d = run_diagnostics(&diamond_graph(), &method.spec(mode, 0.85), 2).unwrap();
                assert!((d.overlap_total() - 1.0).abs() < 1e-10);
                assert_eq!(d.selected.len(), 2);
                assert!(d.selected.contains(&d.dominant()));
            }
        }
    }

    #[test]
    fn star_symmetry_zeroes_overlaps() {
        // leaves are interchangeable, so eigenvectors that are not
        // leaf-symmetric are orthogonal to any symmetric initial state
        let d = run_diagnostics(
            &star_graph(),
            &QuantumMethod::CqPrU.spec(Mode::Hub, 0.85),
            5,
        )
        .unwrap();
        assert!(d.zero_overlap_count() >= 3, "{:?}", d.overlaps);
    }

    #[test]
    fn csv_shapes() {
        let d = run_diagnostics(
            &star_graph(),
            &QuantumMethod::CqHitsW.spec(Mode::Authority, 0.85),
            3,
        )
        .unwrap();
        let mut spectrum = Vec::new();
        d.write_spectrum_csv(&mut spectrum).unwrap();
        let spectrum = String::from_utf8(spectrum).unwrap();
        assert_eq!(spectrum.lines().count(), 6);
        assert!(spectrum.starts_with("j,theta,overlap,group\n"));

        let mut vectors = Vec::new();
        d.write_eigenvectors_csv(&mut vectors).unwrap();
        let vectors = String::from_utf8(vectors).unwrap();
        assert_eq!(vectors.lines().next().unwrap().split(',').count(), 2 + 3);
        assert_eq!(vectors.lines().count(), 6);
    }
}
