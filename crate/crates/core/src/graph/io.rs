use std::collections::BTreeMap;

use super::Graph;
use crate::error::{Error, Result};

/// Parses `u,v[,w]` lines into a graph with `max index + 1` vertices.
///
/// Text after `#` is ignored, as are blank lines. The weight defaults to 1.
/// Self-loops, non-positive weights and duplicates with a conflicting weight
/// are reported with their 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    let mut n = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(err(format!("expected `u,v` or `u,v,w`, got {content:?}")));
        }
        let vertex = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(format!("invalid vertex index {s:?}")))
        };
        let (u, v) = (vertex(fields[0])?, vertex(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| err(format!("invalid weight {s:?}")))?,
            None => 1.0,
        };
        if u == v {
            return Err(err(format!("self-loop at vertex {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(err(format!("weight must be positive, got {w}")));
        }
        let key = (u.min(v), u.max(v));
        if let Some((old, first)) = edges.get(&key) {
            if *old != w {
                return Err(err(format!(
                    "edge ({}, {}) repeats line {first} with weight {w} instead of {old}",
                    key.0, key.1
                )));
            }
            continue;
        }
        edges.insert(key, (w, line));
        n = n.max(key.1 + 1);
    }
    Graph::from_edges(n, edges.into_iter().map(|((u, v), (w, _))| (u, v, w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_weights_comments_and_blanks() {
        let g = parse_edge_list("# header\n0,1\n\n1, 2 ,0.5 # trailing\n2,0,3\n").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1, 1.0), (0, 2, 3.0), (1, 2, 0.5)]);
    }

    #[test]
    fn reports_line_numbers() {
        match parse_edge_list("0,1\n1,1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_edge_list("0,1,2\n\n1,0,3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_edge_list("0,1,-1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_edge_list("0;1\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn identical_duplicates_are_merged() {
        let g = parse_edge_list("0,1,2\n1,0,2\n").unwrap();
        assert_eq!(g.n_edges(), 1);
    }
}
