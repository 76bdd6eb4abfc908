//! Edge-list text format.
//!
//! ```text
//! n m
//! u v w [g|v]
//! ...
//! ```
//!
//! Vertex ids are 0-based, weights are decimal. The optional fourth column
//! tags emulator edges as graph (`g`) or virtual (`v`). Blank lines and lines
//! starting with `#` are ignored. Weights are written with Rust's shortest
//! round-trip float formatting, so reading back what was written is exact.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::emulator::{EdgeKind, EmulatorEdge, EmulatorResult};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Edge list as read from text, before conversion to a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
    /// Present when every edge line carried a tag column.
    pub tags: Option<Vec<EdgeKind>>,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Parses and validates an edge list. `origin` names the source in errors.
pub fn parse_edge_list(text: &str, origin: &str) -> Result<EdgeList> {
    let err = |line: usize, msg: String| Error::Parse {
        path: origin.to_string(),
        line,
        msg,
    };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| err(1, "missing `n m` header".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = head.as_slice() else {
        return Err(err(hl, format!("expected `n m`, found `{header}`")));
    };
    let n: usize = n
        .parse()
        .map_err(|_| err(hl, format!("bad vertex count `{n}`")))?;
    let m: usize = m
        .parse()
        .map_err(|_| err(hl, format!("bad edge count `{m}`")))?;

    let mut edges = Vec::with_capacity(m);
    let mut tags = Vec::new();
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (ln, line) in lines {
        let cols: Vec<&str> = line.split_whitespace().collect();
        if !(3..=4).contains(&cols.len()) {
            return Err(err(ln, format!("expected `u v w [g|v]`, found `{line}`")));
        }
        let id = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| err(ln, format!("bad vertex id `{s}`")))?;
            if v >= n {
                return Err(err(ln, format!("vertex {v} out of range (n = {n})")));
            }
            Ok(v)
        };
        let (u, v) = (id(cols[0])?, id(cols[1])?);
        let w: f64 = cols[2]
            .parse()
            .map_err(|_| err(ln, format!("bad weight `{}`", cols[2])))?;
        if !(w.is_finite() && w > 0.0) {
            return Err(err(ln, format!("weight must be positive, got {w}")));
        }
        if u == v {
            return Err(err(ln, format!("self-loop at vertex {u}")));
        }
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, ln) {
            return Err(err(
                ln,
                format!("duplicate edge {{{}, {}}} (first on line {first})", key.0, key.1),
            ));
        }
        if let Some(t) = cols.get(3) {
            tags.push(match *t {
                "g" => EdgeKind::Graph,
                "v" => EdgeKind::Virtual,
                _ => return Err(err(ln, format!("bad edge tag `{t}`"))),
            });
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(err(hl, format!("header declares {m} edges, found {}", edges.len())));
    }
    let tags = match tags.len() {
        0 => None,
        k if k == edges.len() => Some(tags),
        _ => return Err(err(hl, "tag column must be present on all edges or none".into())),
    };
    Ok(EdgeList { n, edges, tags })
}

pub fn parse_graph(text: &str, origin: &str) -> Result<WeightedGraph> {
    let el = parse_edge_list(text, origin)?;
    WeightedGraph::new(el.n, el.edges)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_edge_list(&text, &path.display().to_string())
}

/// Reads a graph; a tag column, if present, is ignored.
pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let el = read_edge_list(path)?;
    WeightedGraph::new(el.n, el.edges)
}

pub fn format_graph(g: &WeightedGraph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(s, "{} {} {}", e.u, e.v, e.w);
    }
    s
}

pub fn write_graph(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_graph(g)).map_err(|e| io_err(path, e))
}

pub fn format_emulator(emu: &EmulatorResult) -> String {
    let mut s = format!("{} {}\n", emu.n, emu.edges.len());
    for EmulatorEdge { u, v, w, kind } in &emu.edges {
        let _ = writeln!(s, "{u} {v} {w} {}", kind.tag());
    }
    s
}

pub fn write_emulator(emu: &EmulatorResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_emulator(emu)).map_err(|e| io_err(path, e))
}

/// Whitespace-separated vertex ids.
pub fn parse_subset(text: &str, origin: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        for tok in line.split_whitespace() {
            out.push(tok.parse().map_err(|_| Error::Parse {
                path: origin.to_string(),
                line: i + 1,
                msg: format!("bad vertex id `{tok}`"),
            })?);
        }
    }
    Ok(out)
}

pub fn read_subset(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_subset(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(e: Error) -> usize {
        match e {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn round_trip_decimal_weights() {
        let g = WeightedGraph::new(4, [(0, 1, 0.1), (1, 2, 2.5), (2, 3, 1e-7), (0, 3, 12345.678)])
            .unwrap();
        assert_eq!(parse_graph(&format_graph(&g), "mem").unwrap(), g);
    }

    #[test]
    fn duplicate_edge_reports_line() {
        let e = parse_graph("3 2\n0 1 1\n1 0 2\n", "mem").unwrap_err();
        assert_eq!(line_of(e), 3);
    }

    #[test]
    fn negative_weight_reports_line() {
        let e = parse_graph("3 2\n0 1 1\n\n1 2 -2\n", "mem").unwrap_err();
        assert_eq!(line_of(e), 4);
    }

    #[test]
    fn malformed_lines() {
        for (text, line) in [
            ("", 1),
            ("3\n", 1),
            ("3 1\n0 1\n", 2),
            ("3 1\n0 5 1\n", 2),
            ("3 1\n0 x 1\n", 2),
            ("3 2\n0 1 1\n", 1),
            ("3 1\n1 1 1\n", 2),
            ("3 1\n0 1 1 q\n", 2),
        ] {
            assert_eq!(line_of(parse_graph(text, "mem").unwrap_err()), line, "{text:?}");
        }
    }

    #[test]
    fn tagged_edges() {
        let el = parse_edge_list("# emulator\n3 2\n0 1 1 g\n0 2 2.5 v\n", "mem").unwrap();
        assert_eq!(el.tags, Some(vec![EdgeKind::Graph, EdgeKind::Virtual]));
        assert!(parse_edge_list("3 2\n0 1 1 g\n0 2 2.5\n", "mem").is_err());
    }

    #[test]
    fn subset_ids() {
        assert_eq!(parse_subset("1 2\n# c\n 7\n", "mem").unwrap(), vec![1, 2, 7]);
        assert!(parse_subset("1 a", "mem").is_err());
    }
}
