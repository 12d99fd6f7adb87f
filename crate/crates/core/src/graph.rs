//! Simple unweighted directed graphs.
//!
//! Nodes are indexed `0..n` inside the library. Every text format (edge
//! lists, score tables, CLI output) uses 1-based labels `1..=n`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::{Error, Result};

/// Which centrality role is being ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", try_from = "String")]
pub enum Mode {
    Hub,
    Authority,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::Hub, Mode::Authority];

    /// Degree used by the weighted initial state and by the pathology check:
    /// in-degree for authorities, out-degree for hubs.
    pub fn degree_kind(self) -> DegreeKind {
        match self {
            Mode::Hub => DegreeKind::Out,
            Mode::Authority => DegreeKind::In,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Hub => "hub",
            Mode::Authority => "authority",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TryFrom<String> for Mode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hub" | "hubs" => Ok(Mode::Hub),
            "auth" | "authority" | "authorities" => Ok(Mode::Authority),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DegreeKind {
    In,
    Out,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeVector {
    pub kind: DegreeKind,
    pub values: Vec<usize>,
}

impl DegreeVector {
    pub fn total(&self) -> usize {
        self.values.iter().sum()
    }
}

/// Simple directed graph: no self-loops, no parallel edges.
///
/// Immutable once built. Edges are kept sorted, which makes serialization
/// and equality deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    successors: Vec<Vec<usize>>,
    predecessors: Vec<Vec<usize>>,
}

impl DirectedGraph {
    /// Builds a graph from 0-based edges. Duplicate edges are collapsed;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph(
                "graph must have at least one node".into(),
            ));
        }
        let mut list = Vec::new();
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) out of range for {n} nodes",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on node {}", i + 1)));
            }
            list.push((i, j));
        }
        list.sort_unstable();
        list.dedup();

        let mut successors = vec![Vec::new(); n];
        let mut predecessors = vec![Vec::new(); n];
        for &(i, j) in &list {
            successors[i].push(j);
            predecessors[j].push(i);
        }
        for p in &mut predecessors {
            p.sort_unstable();
        }
        Ok(Self {
            n,
            edges: list,
            successors,
            predecessors,
        })
    }

    /// Same as [`DirectedGraph::from_edges`] with 1-based labels.
    pub fn from_labeled_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(i, j)) = edges.iter().find(|(i, j)| *i == 0 || *j == 0) {
            return Err(Error::InvalidGraph(format!(
                "edge ({i}, {j}): node labels start at 1"
            )));
        }
        Self::from_edges(n, edges.iter().map(|&(i, j)| (i - 1, j - 1)))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted 0-based edges.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.edges.binary_search(&(i, j)).is_ok()
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.successors[i]
    }

    pub fn predecessors(&self, j: usize) -> &[usize] {
        &self.predecessors[j]
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.successors[i].len()
    }

    pub fn in_degree(&self, j: usize) -> usize {
        self.predecessors[j].len()
    }

    /// 0/1 adjacency matrix, `A[i][j] = 1` iff `i → j`.
    pub fn adjacency(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n, self.n);
        for &(i, j) in &self.edges {
            a[(i, j)] = 1.0;
        }
        a
    }

    pub fn degrees(&self, kind: DegreeKind) -> DegreeVector {
        let values = match kind {
            DegreeKind::In => self.predecessors.iter().map(Vec::len).collect(),
            DegreeKind::Out => self.successors.iter().map(Vec::len).collect(),
        };
        DegreeVector { kind, values }
    }

    /// Graph with every edge flipped; its adjacency matrix is `Aᵀ`.
    pub fn reverse(&self) -> DirectedGraph {
        Self::from_edges(self.n, self.edges.iter().map(|&(i, j)| (j, i)))
            .expect("reversing a valid graph yields a valid graph")
    }

    pub fn is_weakly_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in self.successors[v].iter().chain(&self.predecessors[v]) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.n
    }

    /// Edge-list text: an `n=<count>` header followed by sorted 1-based pairs.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for &(i, j) in &self.edges {
            out.push_str(&format!("{} {}\n", i + 1, j + 1));
        }
        out
    }
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labeled: Vec<_> = self.edges.iter().map(|&(i, j)| (i + 1, j + 1)).collect();
        f.debug_struct("DirectedGraph")
            .field("n", &self.n)
            .field("edges", &labeled)
            .finish()
    }
}

/// Result of parsing an edge list.
#[derive(Debug, Clone)]
pub struct ParsedEdgeList {
    pub graph: DirectedGraph,
    /// Number of repeated edges that were collapsed.
    pub duplicates: usize,
}

/// Parses whitespace-separated `i j` pairs with 1-based labels.
///
/// Blank lines and `#` comments are ignored. An optional `n=<count>` line
/// declares trailing isolated nodes; `declared_nodes` plays the same role
/// when the text has no header. The node count is the largest of the
/// declared count and the largest label seen.
pub fn parse_edge_list(text: &str, declared_nodes: Option<usize>) -> Result<ParsedEdgeList> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut max_label = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n") {
            let rest = rest.trim_start();
            if let Some(value) = rest.strip_prefix('=') {
                let count = value.trim().parse::<usize>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad node-count header '{line}'"),
                })?;
                if header.is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        message: "node-count header given twice".into(),
                    });
                }
                header = Some((count, line_no));
                continue;
            }
        }

        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected 'i j', got '{line}'"),
            });
        };
        let label = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(0) | Err(_) => Err(Error::Parse {
                    line: line_no,
                    message: format!("'{s}' is not a positive integer node label"),
                }),
                Ok(v) => Ok(v),
            }
        };
        let (i, j) = (label(a)?, label(b)?);
        if i == j {
            return Err(Error::SelfLoop {
                line: line_no,
                node: i,
            });
        }
        max_label = max_label.max(i).max(j);
        edges.push((i - 1, j - 1));
    }

    let declared = match header {
        Some((count, line)) => {
            if count < max_label {
                return Err(Error::Parse {
                    line,
                    message: format!("header declares {count} nodes but label {max_label} is used"),
                });
            }
            Some(count)
        }
        None => declared_nodes,
    };
    let n = max_label.max(declared.unwrap_or(0));
    if n == 0 {
        return Err(Error::InvalidGraph("edge list declares no nodes".into()));
    }

    let total = edges.len();
    let graph = DirectedGraph::from_edges(n, edges)?;
    let duplicates = total - graph.edge_count();
    if duplicates > 0 {
        log::warn!("collapsed {duplicates} duplicate edge(s)");
    }
    Ok(ParsedEdgeList { graph, duplicates })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn star() -> DirectedGraph {
        DirectedGraph::from_labeled_edges(5, &[(1, 2), (1, 3), (1, 4), (1, 5)]).unwrap()
    }

    fn diamond() -> DirectedGraph {
        DirectedGraph::from_labeled_edges(5, &[(1, 2), (1, 3), (1, 4), (2, 5), (3, 5), (4, 5)])
            .unwrap()
    }

    #[test]
    fn parses_path() {
        let parsed = parse_edge_list("1 2\n2 3\n3 4", None).unwrap();
        assert_eq!(parsed.graph.node_count(), 4);
        assert_eq!(parsed.graph.edges(), &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(parsed.duplicates, 0);
    }

    #[test]
    fn empty_text_with_declared_count() {
        let parsed = parse_edge_list("", Some(1)).unwrap();
        assert_eq!(parsed.graph.node_count(), 1);
        assert_eq!(parsed.graph.edge_count(), 0);
        assert!(parse_edge_list("# nothing\n", None).is_err());
    }

    #[test]
    fn duplicates_collapse() {
        let parsed = parse_edge_list("1 2\n1 2\n2 3", None).unwrap();
        assert_eq!(parsed.graph.edge_count(), 2);
        assert_eq!(parsed.duplicates, 1);
    }

    #[test]
    fn header_comments_and_isolated_nodes() {
        let text = "# tiny\nn=6\n1 2 # trailing comment\n\n3 1\n";
        let g = parse_edge_list(text, None).unwrap().graph;
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 2);
        assert!(!g.is_weakly_connected());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edge_list("1 2\n2 x\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_edge_list("1 2\n3\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_edge_list("1 2\n0 1\n", None) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_edge_list("1 2\n\n4 4\n", None) {
            Err(Error::SelfLoop { line, node }) => assert_eq!((line, node), (3, 4)),
            other => panic!("expected self-loop error, got {other:?}"),
        }
        assert!(parse_edge_list("n=2\n1 3\n", None).is_err());
    }

    #[test]
    fn adjacency_of_path_and_star() {
        let path = parse_edge_list("1 2\n2 3\n3 4", None).unwrap().graph;
        let a = path.adjacency();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[(i, j)], if j == i + 1 { 1.0 } else { 0.0 });
            }
        }
        let a = star().adjacency();
        assert_eq!(a.row(0), &[0.0, 1.0, 1.0, 1.0, 1.0]);
        for i in 1..5 {
            assert!(a.row(i).iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn undirected_pair_is_symmetric() {
        let g = DirectedGraph::from_labeled_edges(2, &[(1, 2), (2, 1)]).unwrap();
        let a = g.adjacency();
        assert_eq!(a, a.transpose());
    }

    #[test]
    fn degree_vectors() {
        assert_eq!(star().degrees(DegreeKind::Out).values, vec![4, 0, 0, 0, 0]);
        assert_eq!(star().degrees(DegreeKind::In).values, vec![0, 1, 1, 1, 1]);
        assert_eq!(
            diamond().degrees(DegreeKind::In).values,
            vec![0, 1, 1, 1, 3]
        );
    }

    #[test]
    fn reverse_flips_edges() {
        let path = parse_edge_list("1 2\n2 3\n3 4", None).unwrap().graph;
        assert_eq!(path.reverse().edges(), &[(1, 0), (2, 1), (3, 2)]);
        let rs = star().reverse();
        assert_eq!(rs.degrees(DegreeKind::In).values, vec![4, 0, 0, 0, 0]);
        let d = diamond();
        assert_eq!(d.reverse().adjacency(), d.adjacency().transpose());
    }

    #[test]
    fn weak_connectivity() {
        assert!(parse_edge_list("1 2\n2 3\n3 4", None)
            .unwrap()
            .graph
            .is_weakly_connected());
        let split = DirectedGraph::from_labeled_edges(4, &[(1, 2), (3, 4)]).unwrap();
        assert!(!split.is_weakly_connected());
        assert!(DirectedGraph::from_edges(1, [])
            .unwrap()
            .is_weakly_connected());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("auth".parse::<Mode>().unwrap(), Mode::Authority);
        assert_eq!("Hub".parse::<Mode>().unwrap(), Mode::Hub);
        assert!("sideways".parse::<Mode>().is_err());
    }

    fn arb_graph() -> impl Strategy<Value = DirectedGraph> {
        (1usize..12).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..40).prop_map(move |pairs| {
                DirectedGraph::from_edges(n, pairs.into_iter().filter(|(i, j)| i != j)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn degree_sums_match_edge_count(g in arb_graph()) {
            prop_assert_eq!(g.degrees(DegreeKind::In).total(), g.edge_count());
            prop_assert_eq!(g.degrees(DegreeKind::Out).total(), g.edge_count());
        }

        #[test]
        fn reverse_transposes_and_is_involutive(g in arb_graph()) {
            prop_assert_eq!(g.reverse().adjacency(), g.adjacency().transpose());
            prop_assert_eq!(g.reverse().reverse(), g);
        }

        #[test]
        fn edge_list_round_trip(g in arb_graph()) {
            let text = g.to_edge_list();
            let parsed = parse_edge_list(&text, None).unwrap();
            prop_assert_eq!(parsed.duplicates, 0);
            prop_assert_eq!(parsed.graph, g);
        }
    }
}
