//! Graph file formats.
//!
//! **Edge list** — plain text, one `source target` pair per line, vertices
//! 1-indexed, whitespace separated. `#` starts a comment (whole-line or
//! trailing). The vertex count is the largest index mentioned unless a line
//! `n <count>` declares it explicitly (needed for isolated trailing
//! vertices, e.g. a single-vertex graph):
//!
//! ```text
//! # three-vertex example
//! n 3
//! 1 2
//! 2 1
//! 3 1
//! 3 2
//! ```
//!
//! **JSON** — `{"n": 3, "edges": [[1, 2], [2, 1], [3, 1], [3, 2]]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::DirectedGraph;
use crate::{Error, Result};

/// Supported on-disk graph formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    /// Whitespace-separated edge list.
    EdgeList,
    /// `{"n": .., "edges": [[s, t], ..]}`.
    Json,
}

impl GraphFormat {
    /// Guess the format from a file extension (`.json` → JSON, anything
    /// else → edge list).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => GraphFormat::Json,
            _ => GraphFormat::EdgeList,
        }
    }
}

impl std::str::FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "edge-list" | "txt" => Ok(GraphFormat::EdgeList),
            "json" => Ok(GraphFormat::Json),
            other => Err(Error::InvalidParameter(format!(
                "unknown graph format '{other}' (expected edgelist or json)"
            ))),
        }
    }
}

/// Serialized JSON form of a graph (1-indexed edges).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    /// Vertex count.
    pub n: usize,
    /// 1-indexed `[source, target]` pairs.
    pub edges: Vec<[usize; 2]>,
}

/// Parse a graph in the given format.
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<DirectedGraph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::Json => parse_json(text),
    }
}

/// Parse the edge-list text format.
pub fn parse_edge_list(text: &str) -> Result<DirectedGraph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_vertex = 0;
    let mut edge_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if tokens[0] == "n" {
            if tokens.len() != 2 {
                return Err(parse_err("expected `n <count>`".into()));
            }
            if declared.is_some() {
                return Err(parse_err("vertex count declared twice".into()));
            }
            if !edges.is_empty() {
                return Err(parse_err("vertex count must precede the edges".into()));
            }
            let n = tokens[1]
                .parse::<usize>()
                .map_err(|_| parse_err(format!("invalid vertex count '{}'", tokens[1])))?;
            declared = Some(n);
            continue;
        }
        if tokens.len() != 2 {
            return Err(parse_err(format!(
                "expected `source target`, found {} field(s)",
                tokens.len()
            )));
        }
        let mut pair = [0usize; 2];
        for (slot, tok) in pair.iter_mut().zip(&tokens) {
            *slot = tok
                .parse::<usize>()
                .map_err(|_| parse_err(format!("invalid vertex '{tok}'")))?;
            if *slot == 0 {
                return Err(parse_err("vertices are 1-indexed; found 0".into()));
            }
        }
        max_vertex = max_vertex.max(pair[0]).max(pair[1]);
        edges.push((pair[0], pair[1]));
        edge_lines.push(line_no);
    }
    let n = declared.unwrap_or(max_vertex);
    if n == 0 {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "graph has no vertices".into(),
        });
    }
    DirectedGraph::from_edge_list(n, &edges).map_err(|e| locate(e, &edges, &edge_lines))
}

/// Attach the offending line number to an edge-level error.
fn locate(err: Error, edges: &[(usize, usize)], lines: &[usize]) -> Error {
    let find = |pred: &dyn Fn(&(usize, usize)) -> bool| -> Option<usize> {
        edges.iter().rposition(pred).map(|i| lines[i])
    };
    let line = match &err {
        Error::SelfLoop { vertex } => find(&|&(s, t)| s == *vertex && t == *vertex),
        Error::DuplicateEdge { from, to } => find(&|&(s, t)| s == *from && t == *to),
        Error::VertexOutOfRange { vertex, .. } => find(&|&(s, t)| s == *vertex || t == *vertex),
        _ => None,
    };
    match line {
        Some(line) => Error::Parse {
            line,
            message: err.to_string(),
        },
        None => err,
    }
}

/// Parse the JSON graph format.
pub fn parse_json(text: &str) -> Result<DirectedGraph> {
    let gj: GraphJson = serde_json::from_str(text)?;
    if gj.n == 0 {
        return Err(Error::InvalidParameter("graph has no vertices".into()));
    }
    let edges: Vec<_> = gj.edges.iter().map(|e| (e[0], e[1])).collect();
    DirectedGraph::from_edge_list(gj.n, &edges)
}

/// Read and parse a graph file; the format is guessed from the extension
/// unless given.
pub fn read_graph(path: &Path, format: Option<GraphFormat>) -> Result<DirectedGraph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    parse_graph(
        &text,
        format.unwrap_or_else(|| GraphFormat::from_path(path)),
    )
}

/// Render a graph in the edge-list format (always declares `n`).
pub fn to_edge_list(g: &DirectedGraph) -> String {
    let mut s = format!("n {}\n", g.n());
    for (a, b) in g.edges_one_based() {
        s.push_str(&format!("{a} {b}\n"));
    }
    s
}

/// JSON form of a graph.
pub fn to_json(g: &DirectedGraph) -> GraphJson {
    GraphJson {
        n: g.n(),
        edges: g
            .edges_one_based()
            .into_iter()
            .map(|(a, b)| [a, b])
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_edge_list_with_comments() {
        let text = "# G3\n1 2\n2 1 # reciprocal\n\n3 1\n3 2\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges_one_based(), vec![(1, 2), (2, 1), (3, 1), (3, 2)]);
    }

    #[test]
    fn declared_vertex_count() {
        let g = parse_edge_list("n 1\n").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.edge_count(), 0);
        let g = parse_edge_list("n 5\n1 2\n").unwrap();
        assert_eq!(g.n(), 5);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_edge_list("1 2\nfoo bar\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e:?}"),
        }
        match parse_edge_list("1 2\n2 3\n3 3\n").unwrap_err() {
            Error::Parse { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("self-loop"));
            }
            e => panic!("unexpected {e:?}"),
        }
        match parse_edge_list("1 2\n\n1 2\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 3),
            e => panic!("unexpected {e:?}"),
        }
        match parse_edge_list("n 2\n1 3\n").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(
            parse_edge_list("1 2 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("0 1\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("# empty\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn parses_json() {
        let g = parse_json(r#"{"n": 3, "edges": [[1,2],[2,1],[3,1],[3,2]]}"#).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 4);
        assert!(parse_json(r#"{"n": 2, "edges": [[1,1]]}"#).is_err());
        assert!(parse_json(r#"{"edges": []}"#).is_err());
    }

    #[test]
    fn round_trips() {
        let g = DirectedGraph::from_edge_list(4, &[(1, 2), (4, 3)]).unwrap();
        assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g);
        let js = serde_json::to_string(&to_json(&g)).unwrap();
        assert_eq!(parse_json(&js).unwrap(), g);
    }

    #[test]
    fn format_detection() {
        assert_eq!(
            GraphFormat::from_path(Path::new("a.json")),
            GraphFormat::Json
        );
        assert_eq!(
            GraphFormat::from_path(Path::new("a.txt")),
            GraphFormat::EdgeList
        );
        assert_eq!("json".parse::<GraphFormat>().unwrap(), GraphFormat::Json);
        assert!("xml".parse::<GraphFormat>().is_err());
    }
}
