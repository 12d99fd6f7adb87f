//! Four small hand-built graphs with reference scores and rankings for all
//! six methods.

use std::fmt;

use serde::Serialize;

use super::classical_baseline;
use crate::graph::{DirectedGraph, Mode};
use crate::metrics::Ranking;
use crate::quantum::{rank, HamiltonianKind, QuantumMethod};
use crate::{Result, DEFAULT_ALPHA};

/// Absolute tolerance against the four-decimal reference scores.
pub const SCORE_TOLERANCE: f64 = 5e-4;

/// Directed path `1 → 2 → 3 → 4`.
pub fn path_graph() -> DirectedGraph {
    DirectedGraph::from_labeled_edges(4, &[(1, 2), (2, 3), (3, 4)]).expect("valid")
}

/// Node 1 fans out to 2, 3, 4, which all point to node 5.
pub fn diamond_graph() -> DirectedGraph {
    DirectedGraph::from_labeled_edges(5, &[(1, 2), (1, 3), (1, 4), (2, 5), (3, 5), (4, 5)])
        .expect("valid")
}

/// Centre 1 pointing to leaves 2–5.
pub fn star_graph() -> DirectedGraph {
    DirectedGraph::from_labeled_edges(5, &[(1, 2), (1, 3), (1, 4), (1, 5)]).expect("valid")
}

/// A path `1 → … → n1` whose last node points to every node of a complete
/// directed graph on `n2` further nodes.
pub fn tailed_graph(n1: usize, n2: usize) -> DirectedGraph {
    let n = n1 + n2;
    let mut edges: Vec<(usize, usize)> = (1..n1).map(|i| (i, i + 1)).collect();
    edges.extend((n1 + 1..=n).map(|j| (n1, j)));
    for i in n1 + 1..=n {
        edges.extend((n1 + 1..=n).filter(|&j| j != i).map(|j| (i, j)));
    }
    DirectedGraph::from_labeled_edges(n, &edges).expect("valid")
}

/// The six score columns: four quantum methods and their classical baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Column {
    #[serde(rename = "CQHITSu")]
    CqHitsU,
    #[serde(rename = "CQHITSw")]
    CqHitsW,
    #[serde(rename = "HITS")]
    Hits,
    #[serde(rename = "CQPRu")]
    CqPrU,
    #[serde(rename = "CQPRw")]
    CqPrW,
    #[serde(rename = "PR")]
    PageRank,
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::CqHitsU,
        Column::CqHitsW,
        Column::Hits,
        Column::CqPrU,
        Column::CqPrW,
        Column::PageRank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::CqHitsU => "CQHITSu",
            Column::CqHitsW => "CQHITSw",
            Column::Hits => "HITS",
            Column::CqPrU => "CQPRu",
            Column::CqPrW => "CQPRw",
            Column::PageRank => "PR",
        }
    }

    pub fn scores(self, g: &DirectedGraph, mode: Mode, alpha: f64) -> Result<Vec<f64>> {
        let quantum = |m: QuantumMethod| Ok(rank(g, &m.spec(mode, alpha))?.values);
        match self {
            Column::CqHitsU => quantum(QuantumMethod::CqHitsU),
            Column::CqHitsW => quantum(QuantumMethod::CqHitsW),
            Column::CqPrU => quantum(QuantumMethod::CqPrU),
            Column::CqPrW => quantum(QuantumMethod::CqPrW),
            Column::Hits => classical_baseline(g, HamiltonianKind::Hits, mode, alpha),
            Column::PageRank => classical_baseline(g, HamiltonianKind::PageRank, mode, alpha),
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

struct ScoreTable {
    name: &'static str,
    graph: fn() -> DirectedGraph,
    mode: Mode,
    /// Rows per node, columns in [`Column::ALL`] order.
    rows: &'static [[f64; 6]],
}

struct OrderTable {
    name: &'static str,
    graph: fn() -> DirectedGraph,
    mode: Mode,
    /// Tie groups of 1-based labels, best first, in [`Column::ALL`] order.
    rows: [&'static [&'static [usize]]; 6],
}

fn tailed_4_4() -> DirectedGraph {
    tailed_graph(4, 4)
}

const SCORE_TABLES: [ScoreTable; 4] = [
    ScoreTable {
        name: "path hub scores",
        graph: path_graph,
        mode: Mode::Hub,
        rows: &[
            [0.2683, 0.3301, 0.5774, 0.4541, 0.4479, 0.3701],
            [0.2683, 0.3301, 0.5774, 0.2795, 0.3147, 0.2988],
            [0.2683, 0.3301, 0.5774, 0.1820, 0.1636, 0.2149],
            [0.1952, 0.0097, 0.0000, 0.0844, 0.0737, 0.1161],
        ],
    },
    ScoreTable {
        name: "diamond hub scores",
        graph: diamond_graph,
        mode: Mode::Hub,
        rows: &[
            [0.4055, 0.4886, 0.5000, 0.5606, 0.6787, 0.4683],
            [0.1400, 0.1695, 0.5000, 0.0955, 0.0879, 0.1407],
            [0.1400, 0.1695, 0.5000, 0.0955, 0.0879, 0.1407],
            [0.1400, 0.1695, 0.5000, 0.0955, 0.0879, 0.1407],
            [0.1746, 0.0028, 0.0000, 0.1528, 0.0578, 0.1096],
        ],
    },
    ScoreTable {
        name: "star hub scores",
        graph: star_graph,
        mode: Mode::Hub,
        rows: &[
            [0.2599, 0.9906, 1.0000, 0.5685, 0.7162, 0.5238],
            [0.1850, 0.0023, 0.0000, 0.1079, 0.0710, 0.1190],
            [0.1850, 0.0023, 0.0000, 0.1079, 0.0710, 0.1190],
            [0.1850, 0.0023, 0.0000, 0.1079, 0.0710, 0.1190],
            [0.1850, 0.0023, 0.0000, 0.1079, 0.0710, 0.1190],
        ],
    },
    ScoreTable {
        name: "star authority scores",
        graph: star_graph,
        mode: Mode::Authority,
        rows: &[
            [0.1850, 0.0007, 0.0000, 0.1491, 0.2484, 0.1709],
            [0.2037, 0.2498, 0.5000, 0.2127, 0.1879, 0.2073],
            [0.2037, 0.2498, 0.5000, 0.2127, 0.1879, 0.2073],
            [0.2037, 0.2498, 0.5000, 0.2127, 0.1879, 0.2073],
            [0.2037, 0.2498, 0.5000, 0.2127, 0.1879, 0.2073],
        ],
    },
];

const ORDER_TABLES: [OrderTable; 2] = [
    OrderTable {
        name: "tailed hub ranking",
        graph: tailed_4_4,
        mode: Mode::Hub,
        rows: [
            &[&[4], &[1, 2, 3], &[5, 6, 7, 8]],
            &[&[4], &[5, 6, 7, 8], &[1, 2, 3]],
            &[&[4], &[5, 6, 7, 8], &[1, 2, 3]],
            &[&[1], &[2], &[3], &[4], &[5, 6, 7, 8]],
            &[&[1], &[2], &[3], &[4], &[5, 6, 7, 8]],
            &[&[1], &[2], &[3], &[4], &[5, 6, 7, 8]],
        ],
    },
    OrderTable {
        name: "tailed authority ranking",
        graph: tailed_4_4,
        mode: Mode::Authority,
        rows: [
            &[&[5, 6, 7, 8], &[2, 3, 4], &[1]],
            &[&[5, 6, 7, 8], &[2, 3, 4], &[1]],
            &[&[5, 6, 7, 8], &[1, 2, 3, 4]],
            &[&[5, 6, 7, 8], &[3], &[4], &[2], &[1]],
            &[&[5, 6, 7, 8], &[4], &[3], &[2], &[1]],
            &[&[5, 6, 7, 8], &[4], &[3], &[2], &[1]],
        ],
    },
];

/// One reference score compared with its computed value.
#[derive(Debug, Clone, Serialize)]
pub struct CellCheck {
    pub table: &'static str,
    pub column: Column,
    /// 1-based.
    pub node: usize,
    pub expected: f64,
    pub actual: f64,
    pub passed: bool,
}

/// One reference ranking (1-based tie groups) compared with the computed one.
#[derive(Debug, Clone, Serialize)]
pub struct OrderCheck {
    pub table: &'static str,
    pub column: Column,
    pub expected: Vec<Vec<usize>>,
    pub actual: Vec<Vec<usize>>,
    pub passed: bool,
}

/// Computed scores of one table, for display.
#[derive(Debug, Clone, Serialize)]
pub struct ComputedTable {
    pub name: &'static str,
    pub mode: Mode,
    /// `columns[c][node]`, columns in [`Column::ALL`] order.
    pub columns: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub tables: Vec<ComputedTable>,
    pub cells: Vec<CellCheck>,
    pub orders: Vec<OrderCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(|c| c.passed) && self.orders.iter().all(|o| o.passed)
    }

    /// Human-readable description of every failing cell or ranking.
    pub fn failures(&self) -> Vec<String> {
        let cells = self.cells.iter().filter(|c| !c.passed).map(|c| {
            format!(
                "{} / {} / node {}: expected {:.4}, got {:.6}",
                c.table, c.column, c.node, c.expected, c.actual
            )
        });
        let orders = self.orders.iter().filter(|o| !o.passed).map(|o| {
            format!(
                "{} / {}: expected {:?}, got {:?}",
                o.table, o.column, o.expected, o.actual
            )
        });
        cells.chain(orders).collect()
    }

    /// Plain-text rendering of the computed tables and rankings.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.tables {
            out.push_str(&format!("{} ({})\n{:<6}", t.name, t.mode, "node"));
            for c in Column::ALL {
                out.push_str(&format!("{:>10}", c.name()));
            }
            out.push('\n');
            for node in 0..t.columns[0].len() {
                out.push_str(&format!("{:<6}", node + 1));
                for col in &t.columns {
                    out.push_str(&format!("{:>10.4}", col[node]));
                }
                out.push('\n');
            }
            out.push('\n');
        }
        let mut last = "";
        for o in &self.orders {
            if o.table != last {
                out.push_str(&format!("{}\n", o.table));
                last = o.table;
            }
            let groups: Vec<String> = o
                .actual
                .iter()
                .map(|g| {
                    g.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                })
                .collect();
            out.push_str(&format!("{:<8} {}\n", o.column.name(), groups.join(" | ")));
        }
        out
    }
}

fn labeled_groups(scores: &[f64]) -> Result<Vec<Vec<usize>>> {
    Ok(Ranking::new(scores)?
        .tie_groups()
        .into_iter()
        .map(|g| g.into_iter().map(|i| i + 1).collect())
        .collect())
}

/// Recomputes every reference table and ranking at the default damping
/// factor and compares them with the stored values.
pub fn run_small_graph_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport {
        tables: Vec::new(),
        cells: Vec::new(),
        orders: Vec::new(),
    };
    for table in &SCORE_TABLES {
        let g = (table.graph)();
        let columns = Column::ALL
            .iter()
            .map(|c| c.scores(&g, table.mode, DEFAULT_ALPHA))
            .collect::<Result<Vec<_>>>()?;
        for (c, column) in Column::ALL.iter().enumerate() {
            for (node, row) in table.rows.iter().enumerate() {
                let (expected, actual) = (row[c], columns[c][node]);
                report.cells.push(CellCheck {
                    table: table.name,
                    column: *column,
                    node: node + 1,
                    expected,
                    actual,
                    passed: (expected - actual).abs() <= SCORE_TOLERANCE,
                });
            }
        }
        report.tables.push(ComputedTable {
            name: table.name,
            mode: table.mode,
            columns,
        });
    }
    for table in &ORDER_TABLES {
        let g = (table.graph)();
        for (column, expected) in Column::ALL.iter().zip(table.rows) {
            let expected: Vec<Vec<usize>> = expected.iter().map(|g| g.to_vec()).collect();
            let actual = labeled_groups(&column.scores(&g, table.mode, DEFAULT_ALPHA)?)?;
            report.orders.push(OrderCheck {
                table: table.name,
                column: *column,
                passed: expected == actual,
                expected,
                actual,
            });
        }
    }
    Ok(report)
}
