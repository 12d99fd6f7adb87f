//! Reproducible experiment drivers: the small-graph reference tables, seeded
//! agreement sweeps and spectral diagnostics.

pub mod diagnostics;
pub mod small_graphs;
pub mod sweep;

pub use diagnostics::{run_diagnostics, Diagnostics};
pub use small_graphs::{run_small_graph_suite, Column, SuiteReport};
pub use sweep::{run_sweep, ExperimentManifest, GeneratorConfig, SweepResult, SweepRow};

use crate::classical::{hits, pagerank};
use crate::graph::{DirectedGraph, Mode};
use crate::quantum::HamiltonianKind;
use crate::{Result, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Classical counterpart of a quantum method: HITS for the `ÃᵀÃ` family,
/// PageRank for the Google-matrix family.
pub fn classical_baseline(
    g: &DirectedGraph,
    kind: HamiltonianKind,
    mode: Mode,
    alpha: f64,
) -> Result<Vec<f64>> {
    Ok(match kind {
        HamiltonianKind::Hits => {
            hits(g, DEFAULT_TOL, DEFAULT_MAX_ITER)?
                .into_mode(mode)
                .values
        }
        HamiltonianKind::PageRank => {
            pagerank(g, alpha, mode, DEFAULT_TOL, DEFAULT_MAX_ITER)?.values
        }
    })
}

/// Shortest decimal form of `x` rounded to 10 significant digits.
///
/// ```
/// use ctqw_rank::experiments::format_sig10;
/// assert_eq!(format_sig10(1.0 / 3.0), "0.3333333333");
/// assert_eq!(format_sig10(0.25), "0.25");
/// ```
pub fn format_sig10(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.9e}").parse().expect("formatted float parses");
    // avoid "-0"
    if rounded == 0.0 {
        return "0".into();
    }
    rounded.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig10_formatting() {
        assert_eq!(format_sig10(0.0), "0");
        assert_eq!(format_sig10(-0.0), "0");
        assert_eq!(format_sig10(1.0), "1");
        assert_eq!(format_sig10(2.0 / 3.0), "0.6666666667");
        assert_eq!(format_sig10(123456.789012345), "123456.789");
        assert_eq!(
            format_sig10(1.23456789012e-7),
            "0.0000001234567890".trim_end_matches('0')
        );
        assert_eq!(format_sig10(f64::NAN), "NaN");
    }
}
