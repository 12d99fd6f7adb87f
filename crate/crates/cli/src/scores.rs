//! Reading score files: JSON as written by `rank`, or CSV with `node` and
//! `score` columns.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// Scores sorted by node label.
pub struct ScoreFile {
    pub nodes: Vec<usize>,
    pub scores: Vec<f64>,
}

#[derive(Deserialize)]
struct Row {
    node: usize,
    score: f64,
}

#[derive(Deserialize)]
struct JsonScores {
    scores: Vec<Row>,
}

pub fn read_scores(path: &Path) -> Result<ScoreFile, CliError> {
    let bad = |msg: String| CliError::Input(format!("{}: {msg}", path.display()));
    let text = fs::read_to_string(path).map_err(|e| bad(e.to_string()))?;
    let mut rows: Vec<Row> = if text.trim_start().starts_with('{') {
        serde_json::from_str::<JsonScores>(&text)
            .map_err(|e| bad(e.to_string()))?
            .scores
    } else {
        csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<_, _>>()
            .map_err(|e| bad(e.to_string()))?
    };
    if rows.is_empty() {
        return Err(bad("no scores".into()));
    }
    rows.sort_by_key(|r| r.node);
    if rows.windows(2).any(|w| w[0].node == w[1].node) {
        return Err(bad("repeated node label".into()));
    }
    if rows.iter().any(|r| !r.score.is_finite()) {
        return Err(bad("non-finite score".into()));
    }
    Ok(ScoreFile {
        nodes: rows.iter().map(|r| r.node).collect(),
        scores: rows.iter().map(|r| r.score).collect(),
    })
}
