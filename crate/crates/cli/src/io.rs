//! Graph file formats.
//!
//! Edge-list text: a header line `n m`, then `m` lines `u v` with
//! `0 <= u < v < n`, whitespace separated. JSON:
//! `{"n": ..., "edges": [[u, v], ...]}`. Both round-trip losslessly; the
//! reader sniffs the format from the first non-space byte.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use bncg_core::graph::Graph;

pub fn parse_edgelist(text: &str) -> Result<Graph> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().context("empty edge-list file")?;
    let mut parts = header.split_whitespace();
    let n: usize = parts.next().context("missing node count")?.parse()?;
    let m: usize = parts.next().context("missing edge count")?.parse()?;
    if parts.next().is_some() {
        bail!("header must be exactly 'n m'");
    }
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut parts = line.split_whitespace();
        let u: usize = parts.next().context("missing edge endpoint")?.parse()?;
        let v: usize = parts.next().context("missing edge endpoint")?.parse()?;
        if parts.next().is_some() {
            bail!("edge line must be exactly 'u v': {line:?}");
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        bail!("header promises {m} edges, found {}", edges.len());
    }
    let g = Graph::from_edges(n, edges)?;
    if g.edge_count() != m {
        bail!("duplicate edge lines");
    }
    Ok(g)
}

pub fn format_edgelist(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with('{') {
        Ok(serde_json::from_str(text)?)
    } else {
        parse_edgelist(text)
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

impl std::str::FromStr for GraphFormat {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "edgelist" => Ok(GraphFormat::EdgeList),
            "json" => Ok(GraphFormat::Json),
            other => bail!("unknown graph format {other:?} (edgelist or json)"),
        }
    }
}

pub fn render_graph(g: &Graph, format: GraphFormat) -> Result<String> {
    Ok(match format {
        GraphFormat::EdgeList => format_edgelist(g),
        GraphFormat::Json => format!("{}\n", serde_json::to_string(g)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use bncg_core::graph::family::star;

    #[test]
    fn edgelist_round_trips() {
        let g = star(5);
        let text = format_edgelist(&g);
        assert_eq!(text.lines().next(), Some("5 4"));
        assert_eq!(parse_edgelist(&text).unwrap(), g);
    }

    #[test]
    fn sniffs_json() {
        let g = star(4);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(parse_graph(&json).unwrap(), g);
        assert_eq!(parse_graph(&format_edgelist(&g)).unwrap(), g);
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse_edgelist("").is_err());
        assert!(parse_edgelist("2 1\n0 0\n").is_err());
        assert!(parse_edgelist("2 2\n0 1\n").is_err());
        assert!(parse_edgelist("3 2\n0 1\n1 0\n").is_err());
        assert!(parse_edgelist("x y\n").is_err());
    }
}
