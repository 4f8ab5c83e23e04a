use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Graph, Image};
use crate::error::{Error, Result};

pub const DEFAULT_PATCH_SIZE: usize = 8;
pub const DEFAULT_K_NEIGHBORS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchGraphConfig {
    pub patch_size: usize,
    pub k_neighbors: usize,
    /// Gaussian bandwidth σ in `exp(−d²/σ²)`; `None` uses the median distance
    /// to the k-th neighbor.
    pub bandwidth: Option<f64>,
}

impl Default for PatchGraphConfig {
    fn default() -> Self {
        Self {
            patch_size: DEFAULT_PATCH_SIZE,
            k_neighbors: DEFAULT_K_NEIGHBORS,
            bandwidth: None,
        }
    }
}

impl PatchGraphConfig {
    fn validate(&self, img: &Image) -> Result<()> {
        if self.patch_size == 0 || self.k_neighbors == 0 {
            return Err(Error::InvalidArgument("patch size and k must be positive".into()));
        }
        if img.width() < self.patch_size || img.height() < self.patch_size {
            return Err(Error::InvalidArgument(format!(
                "{}x{} image is smaller than the patch size {}",
                img.width(),
                img.height(),
                self.patch_size
            )));
        }
        let n = img.width() * img.height();
        if self.k_neighbors >= n {
            return Err(Error::TooManyNeighbors {
                k: self.k_neighbors,
                n,
            });
        }
        if let Some(s) = self.bandwidth {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {s}")));
            }
        }
        Ok(())
    }
}

/// Reflection about the edge pixel: `-1 → 1`, `n → n − 2`.
fn reflect(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let r = i.rem_euclid(period);
    if r < n as isize {
        r as usize
    } else {
        (period - r) as usize
    }
}

fn patch_vectors(img: &Image, size: usize) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let anchor = (size as isize - 1) / 2;
    let mut out = Vec::with_capacity(w * h * size * size);
    for r in 0..h {
        for c in 0..w {
            for dr in 0..size as isize {
                let rr = reflect(r as isize + dr - anchor, h);
                for dc in 0..size as isize {
                    let cc = reflect(c as isize + dc - anchor, w);
                    out.push(img.get(rr, cc));
                }
            }
        }
    }
    out
}

/// Exact k-nearest-neighbor lists of pixel patches.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchKnn {
    /// Per vertex, `(neighbor, squared distance)` in ascending distance,
    /// ties broken by smaller index.
    pub neighbors: Vec<Vec<(usize, f64)>>,
}

impl PatchKnn {
    /// Median over vertices of the distance to the k-th neighbor.
    pub fn median_kth_distance(&self) -> f64 {
        let mut d: Vec<f64> = self
            .neighbors
            .iter()
            .map(|nb| nb.last().map_or(0.0, |(_, d2)| d2.sqrt()))
            .collect();
        d.sort_by(f64::total_cmp);
        let m = d.len();
        if m % 2 == 1 {
            d[m / 2]
        } else {
            0.5 * (d[m / 2 - 1] + d[m / 2])
        }
    }

    /// Mean Euclidean distance from each vertex to its neighbors.
    pub fn mean_distances(&self) -> Vec<f64> {
        self.neighbors
            .iter()
            .map(|nb| nb.iter().map(|(_, d2)| d2.sqrt()).sum::<f64>() / nb.len() as f64)
            .collect()
    }
}

/// Computes the kNN table over all pixel patches (brute force, parallel over
/// query pixels, deterministic).
pub fn patch_knn(img: &Image, config: &PatchGraphConfig) -> Result<PatchKnn> {
    config.validate(img)?;
    let dim = config.patch_size * config.patch_size;
    let patches = patch_vectors(img, config.patch_size);
    let n = img.width() * img.height();
    let k = config.k_neighbors;
    let neighbors = (0..n)
        .into_par_iter()
        .map(|i| {
            let pi = &patches[i * dim..(i + 1) * dim];
            let mut best: Vec<(usize, f64)> = Vec::with_capacity(k + 1);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let pj = &patches[j * dim..(j + 1) * dim];
                let d2: f64 = pi.iter().zip(pj).map(|(a, b)| (a - b) * (a - b)).sum();
                if best.len() == k && d2 >= best[k - 1].1 {
                    continue;
                }
                let pos = best.partition_point(|(_, d)| *d <= d2);
                best.insert(pos, (j, d2));
                best.truncate(k);
            }
            best
        })
        .collect();
    Ok(PatchKnn { neighbors })
}

/// Symmetrized (union) kNN graph over pixel patches with Gaussian weights.
pub fn patch_graph(img: &Image, config: &PatchGraphConfig) -> Result<Graph> {
    let knn = patch_knn(img, config)?;
    let sigma = match config.bandwidth {
        Some(s) => s,
        None => {
            let s = knn.median_kth_distance();
            if s == 0.0 {
                return Err(Error::ZeroBandwidth);
            }
            s
        }
    };
    let mut edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (i, nb) in knn.neighbors.iter().enumerate() {
        for &(j, d2) in nb {
            // floor keeps far neighbors as (negligible) edges instead of zeros
            let w = (-d2 / (sigma * sigma)).exp().max(f64::MIN_POSITIVE);
            edges.insert((i.min(j), i.max(j)), w);
        }
    }
    Graph::from_edges(
        img.width() * img.height(),
        edges.into_iter().map(|((u, v), w)| (u, v, w)),
    )
}
