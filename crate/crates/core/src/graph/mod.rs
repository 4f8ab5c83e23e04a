//! Weighted undirected graphs, their Laplacians, and graph-domain scoring.

mod io;
mod laplacian;
mod mesh;
mod patch;
mod pgm;
mod score;
mod synthetic;

pub use io::parse_edge_list;
pub use laplacian::{laplacian, Laplacian, LaplacianKind};
pub use mesh::{mesh_graph, parse_obj, Mesh, ObjStats};
pub use patch::{patch_graph, patch_knn, PatchGraphConfig, PatchKnn, DEFAULT_K_NEIGHBORS, DEFAULT_PATCH_SIZE};
pub use pgm::{encode_pgm_p5, parse_pgm, Image};
pub use score::{
    heatmap_pgm_bytes, score_csv_string, score_graph, write_heatmap_pgm, write_score_csv, GraphScoreOptions,
};
pub use synthetic::{synthetic_anomaly_image, SyntheticScene};

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

/// A weighted undirected graph on vertices `0..n`.
///
/// Edges are stored once as `(u, v, w)` with `u < v` and `w > 0`, sorted by
/// `(u, v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl Graph {
    /// Builds a graph from edges given in either orientation. Repeating an
    /// edge with the same weight is accepted; a conflicting weight is not.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {a}")));
            }
            if a.max(b) >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a}, {b}) out of range for {n} vertices"
                )));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) has weight {w}")));
            }
            let key = (a.min(b), a.max(b));
            match map.insert(key, w) {
                Some(old) if old != w => {
                    return Err(Error::InvalidGraph(format!(
                        "edge ({}, {}) given with weights {old} and {w}",
                        key.0, key.1
                    )))
                }
                _ => {}
            }
        }
        Ok(Self {
            n,
            edges: map.into_iter().map(|((u, v), w)| (u, v, w)).collect(),
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Weighted degrees.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for &(u, v, w) in &self.edges {
            d[u] += w;
            d[v] += w;
        }
        d
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v, _) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj.iter_mut().for_each(|a| a.sort_unstable());
        adj
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `vertices` (sorted, distinct), relabelled
    /// `0..vertices.len()` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= self.n || index[v] != usize::MAX {
                return Err(Error::InvalidGraph(format!("bad vertex {v} in subgraph selection")));
            }
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v, _)| index[*u] != usize::MAX && index[*v] != usize::MAX)
            .map(|&(u, v, w)| (index[u], index[v], w));
        Graph::from_edges(vertices.len(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edges_are_normalized() {
        let g = Graph::from_edges(3, [(2, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 2.0), (0, 2, 1.0)]);
        assert_eq!(g.degrees(), vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(2, [(1, 1, 1.0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1, 0.0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2, 1.0)]).is_err());
        assert!(Graph::from_edges(2, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    }

    #[test]
    fn components_and_subgraphs() {
        let g = Graph::from_edges(5, [(0, 1, 1.0), (3, 4, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        let sub = g.induced(&[3, 4]).unwrap();
        assert_eq!(sub.edges(), &[(0, 1, 1.0)]);
    }
}
