//! Plain-text weighted graphs:
//!
//! ```text
//! # comment
//! n 3
//! e 0 1 1.0
//! e 1 2 2.5
//! ```
//!
//! The `n` line comes before any edge. Node ids are 0-based.

use std::fmt::Write as _;
use std::path::Path;

use sentinel_core::WeightedGraph;

use crate::error::{CliError, Result};

pub fn parse_graph(text: &str, path: &Path) -> Result<WeightedGraph> {
    let mut graph: Option<WeightedGraph> = None;
    for (i, line) in text.lines().enumerate() {
        let fail = |message: String| CliError::Parse { path: path.to_owned(), line: i + 1, message };
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.as_slice() {
            ["n", count] => {
                if graph.is_some() {
                    return Err(fail("second `n` line".into()));
                }
                let n: usize = count.parse().map_err(|_| fail(format!("bad node count `{count}`")))?;
                graph = Some(WeightedGraph::new(n));
            }
            ["e", a, b, w] => {
                let g = graph.as_mut().ok_or_else(|| fail("edge before the `n` line".into()))?;
                let a: usize = a.parse().map_err(|_| fail(format!("bad node id `{a}`")))?;
                let b: usize = b.parse().map_err(|_| fail(format!("bad node id `{b}`")))?;
                let w: f64 = w.parse().map_err(|_| fail(format!("bad weight `{w}`")))?;
                g.add_edge(a.into(), b.into(), w).map_err(|e| fail(e.to_string()))?;
            }
            _ => return Err(fail(format!("expected `n <count>` or `e <i> <j> <w>`, got `{line}`"))),
        }
    }
    graph.ok_or_else(|| CliError::Format { path: path.to_owned(), message: "missing `n <count>` line".into() })
}

pub fn read_graph(path: &Path) -> Result<WeightedGraph> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_graph(&text, path)
}

pub fn format_graph(g: &WeightedGraph) -> String {
    let mut out = format!("n {}\n", g.node_count());
    for e in g.edges() {
        let _ = writeln!(out, "e {} {} {}", e.a.0, e.b.0, e.weight);
    }
    out
}
