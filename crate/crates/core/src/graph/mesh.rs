use std::collections::BTreeSet;

use super::Graph;
use crate::error::{Error, Result};

/// A triangle mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn new(vertices: Vec<[f64; 3]>, faces: Vec<[usize; 3]>) -> Result<Self> {
        for f in &faces {
            if f.iter().any(|&i| i >= vertices.len()) {
                return Err(Error::InvalidArgument(format!(
                    "face {f:?} references a vertex beyond {}",
                    vertices.len()
                )));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(Error::InvalidArgument(format!("degenerate face {f:?}")));
            }
        }
        Ok(Self { vertices, faces })
    }

    pub fn vertices(&self) -> &[[f64; 3]] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }
}

/// Counts of OBJ records that carried no vertex or face data.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ObjStats {
    pub ignored: usize,
}

/// Reads `v` and `f` records of a Wavefront OBJ file. Face indices may be
/// 1-based or negative (relative), with optional `/vt/vn` suffixes; polygons
/// are fan-triangulated.
pub fn parse_obj(text: &str) -> Result<(Mesh, ObjStats)> {
    let mut vertices = Vec::new();
    let mut polygons: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut stats = ObjStats::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        let mut parts = content.split_whitespace();
        let err = |msg: String| Error::Parse { line, msg };
        match parts.next() {
            None => {}
            Some("v") => {
                let coords: Vec<f64> = parts
                    .map(|s| s.parse().map_err(|_| err(format!("invalid coordinate {s:?}"))))
                    .collect::<Result<_>>()?;
                if coords.len() < 3 {
                    return Err(err("vertex needs three coordinates".into()));
                }
                vertices.push([coords[0], coords[1], coords[2]]);
            }
            Some("f") => {
                let mut poly = Vec::new();
                for tok in parts {
                    let head = tok.split('/').next().unwrap_or("");
                    let k: i64 = head
                        .parse()
                        .map_err(|_| err(format!("invalid face index {tok:?}")))?;
                    let resolved = match k {
                        0 => return Err(err("face index 0".into())),
                        k if k > 0 => (k - 1) as usize,
                        k => {
                            let back = k.unsigned_abs() as usize;
                            if back > vertices.len() {
                                return Err(err(format!("relative index {k} before first vertex")));
                            }
                            vertices.len() - back
                        }
                    };
                    poly.push(resolved);
                }
                if poly.len() < 3 {
                    return Err(err("face needs at least three vertices".into()));
                }
                polygons.push((line, poly));
            }
            Some(_) => stats.ignored += 1,
        }
    }
    let mut faces = Vec::new();
    for (line, poly) in polygons {
        if let Some(&bad) = poly.iter().find(|&&i| i >= vertices.len()) {
            return Err(Error::Parse {
                line,
                msg: format!("face index {} out of range", bad + 1),
            });
        }
        for k in 1..poly.len() - 1 {
            let tri = [poly[0], poly[k], poly[k + 1]];
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::Parse {
                    line,
                    msg: "degenerate face".into(),
                });
            }
            faces.push(tri);
        }
    }
    if stats.ignored > 0 {
        log::warn!("ignored {} OBJ records without vertex or face data", stats.ignored);
    }
    Ok((Mesh::new(vertices, faces)?, stats))
}

/// Unit-weight graph on the mesh vertices with one edge per triangle side.
pub fn mesh_graph(mesh: &Mesh) -> Result<Graph> {
    let mut edges = BTreeSet::new();
    for f in mesh.faces() {
        for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
            edges.insert((a.min(b), a.max(b)));
        }
    }
    Graph::from_edges(mesh.vertices().len(), edges.into_iter().map(|(u, v)| (u, v, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TETRA: &str = "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nf 1 2 3\nf 1 2 4\nf 1 3 4\nf 2 3 4\n";

    #[test]
    fn tetrahedron_is_complete() {
        let (mesh, stats) = parse_obj(TETRA).unwrap();
        assert_eq!(stats.ignored, 0);
        let g = mesh_graph(&mesh).unwrap();
        assert_eq!(g.n_vertices(), 4);
        assert_eq!(g.n_edges(), 6);
        assert!(g.degrees().iter().all(|d| *d == 3.0));
    }

    #[test]
    fn quad_is_fan_triangulated() {
        let (mesh, _) = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1/1 2/2/2 3//3 4\n").unwrap();
        assert_eq!(mesh.faces(), &[[0, 1, 2], [0, 2, 3]]);
        assert_eq!(mesh_graph(&mesh).unwrap().n_edges(), 5);
    }

    #[test]
    fn negative_indices_and_ignored_records() {
        let (mesh, stats) = parse_obj("o thing\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nf -3 -2 -1\n").unwrap();
        assert_eq!(mesh.faces(), &[[0, 1, 2]]);
        assert_eq!(stats.ignored, 2);
    }

    #[test]
    fn bad_faces() {
        assert!(matches!(
            parse_obj("v 0 0 0\nv 1 0 0\nf 1 2 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 1 2\n").is_err());
        assert!(parse_obj("v 0 0 0\nf 1 2\n").is_err());
    }
}
