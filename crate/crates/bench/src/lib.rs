//! Shared fixtures for the benchmarks.

use nodal_core::eigen::SymOperator;
use nodal_core::graph::{laplacian, synthetic_anomaly_image, Graph, LaplacianKind};
use nodal_core::Image;

/// Combinatorial Laplacian of a `w × h` grid graph.
pub fn grid_laplacian(w: usize, h: usize) -> SymOperator {
    let mut edges = Vec::new();
    for r in 0..h {
        for c in 0..w {
            let i = r * w + c;
            if c + 1 < w {
                edges.push((i, i + 1, 1.0));
            }
            if r + 1 < h {
                edges.push((i, i + w, 1.0));
            }
        }
    }
    let g = Graph::from_edges(w * h, edges).expect("grid graph");
    laplacian(&g, LaplacianKind::Combinatorial).expect("grid laplacian").operator
}

/// Seeded anomaly image used by the graph pipeline benches.
pub fn scene(size: usize) -> Image {
    synthetic_anomaly_image(size, size / 8, 0).expect("synthetic scene").image
}
