use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::{laplacian, Graph, LaplacianKind};
use crate::eigen::{dense_sym_eig, lanczos_smallest_with, LanczosOptions};
use crate::error::{Error, Result};
use crate::spectral::{
    score_with_policy, DegeneratePolicy, DomainTag, Normalization, ScoreConfig, ScoreField,
    DEFAULT_DEGENERACY_TOL,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GraphScoreOptions {
    /// Number of nontrivial eigenpairs per connected component.
    pub n_terms: usize,
    pub kind: LaplacianKind,
    pub normalization: Normalization,
    pub policy: DegeneratePolicy,
    /// Relative residual tolerance of the eigensolver.
    pub tol: f64,
    /// Seed of the Lanczos start vector.
    pub seed: u64,
    pub lanczos: LanczosOptions,
}

impl Default for GraphScoreOptions {
    fn default() -> Self {
        Self {
            n_terms: 15,
            kind: LaplacianKind::SymNormalized,
            normalization: Normalization::Sup,
            policy: DegeneratePolicy::AsGiven,
            tol: 1e-9,
            seed: 0,
            lanczos: LanczosOptions::default(),
        }
    }
}

impl GraphScoreOptions {
    fn config(&self, n_terms: usize) -> ScoreConfig {
        ScoreConfig::terms(n_terms)
            .with_normalization(self.normalization)
            .with_policy(self.policy)
    }
}

fn score_connected(g: &Graph, opts: &GraphScoreOptions) -> Result<ScoreField> {
    let lap = laplacian(g, opts.kind)?;
    let n = g.n_vertices();
    let m = (opts.n_terms + 1).min(n);
    let mut report = if m < n {
        lanczos_smallest_with(&lap.operator, m, opts.tol, opts.seed, &opts.lanczos)?
    } else {
        dense_sym_eig(&lap.operator)?
    };
    if !report.converged {
        log::warn!(
            "eigensolver did not reach tolerance {:e}; largest residual {:e}",
            opts.tol,
            report.max_residual()
        );
    }
    if let Some(scale) = &lap.rescale {
        for p in &mut report.pairs {
            p.vector.iter_mut().zip(scale).for_each(|(v, s)| *v *= s);
        }
    }
    let basis = report.into_basis(DomainTag::GraphVertices, lap.operator.gershgorin_bound(), None)?;
    let terms = opts.n_terms.min(basis.len());
    if terms == 0 {
        return Err(Error::NoEigenpairsSelected);
    }
    score_with_policy(&basis, &opts.config(terms), DEFAULT_DEGENERACY_TOL)
}

/// Spectral score on every vertex of `g`.
///
/// The trivial Laplacian mode of each connected component is dropped and the
/// next `n_terms` pairs are used. Disconnected graphs are scored component by
/// component; isolated vertices score 0 under the combinatorial Laplacian and
/// are rejected by the normalized ones.
pub fn score_graph(g: &Graph, opts: &GraphScoreOptions) -> Result<ScoreField> {
    if opts.n_terms == 0 {
        return Err(Error::NoEigenpairsSelected);
    }
    if g.n_edges() == 0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    let components = g.components();
    if components.len() == 1 {
        return score_connected(g, opts);
    }
    log::warn!(
        "graph has {} connected components; scoring each separately",
        components.len()
    );
    let mut values = vec![0.0; g.n_vertices()];
    let mut hasher = Sha256::new();
    for comp in &components {
        if comp.len() == 1 {
            if opts.kind != LaplacianKind::Combinatorial {
                return Err(Error::IsolatedVertex(comp[0]));
            }
            hasher.update(format!("isolated:{};", comp[0]));
            continue;
        }
        let field = score_connected(&g.induced(comp)?, opts)?;
        hasher.update(field.basis_hash());
        hasher.update(b";");
        for (&v, s) in comp.iter().zip(field.values()) {
            values[v] = *s;
        }
    }
    let hash = hasher
        .finalize()
        .iter()
        .fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
    ScoreField::from_parts(values, opts.config(opts.n_terms), hash)
}

/// `index,score` lines with 17 significant digits.
pub fn score_csv_string(values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 28);
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v:.16e}");
    }
    out
}

pub fn write_score_csv(values: &[f64], path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, score_csv_string(values))?;
    Ok(())
}

/// Binary 8-bit PGM of a row-major field, min–max scaled to `0..=255`. A
/// constant field maps to mid-gray.
pub fn heatmap_pgm_bytes(values: &[f64], width: usize, height: usize) -> Result<Vec<u8>> {
    if width * height != values.len() || values.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "{width}x{height} heatmap does not match {} values",
            values.len()
        )));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let levels: Vec<u8> = values
        .iter()
        .map(|v| {
            if hi > lo {
                (255.0 * (v - lo) / (hi - lo)).round() as u8
            } else {
                128
            }
        })
        .collect();
    Ok(super::encode_pgm_p5(width, height, &levels))
}

pub fn write_heatmap_pgm(values: &[f64], width: usize, height: usize, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, heatmap_pgm_bytes(values, width, height)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_pgm;

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n, 1.0))).unwrap()
    }

    #[test]
    fn cycle_score_is_constant_under_rotation_averaging() {
        let opts = GraphScoreOptions {
            n_terms: 2,
            kind: LaplacianKind::Combinatorial,
            policy: DegeneratePolicy::RotationAverage { trials: 12, seed: 3 },
            ..Default::default()
        };
        let f = score_graph(&cycle(12), &opts).unwrap();
        let v = f.values();
        assert!(v.iter().all(|x| (x - v[0]).abs() < 1e-12), "{v:?}");
    }

    #[test]
    fn disconnected_graphs_score_per_component() {
        let g = Graph::from_edges(7, [(0, 1, 1.0), (1, 2, 1.0), (4, 5, 1.0), (5, 6, 1.0), (4, 6, 1.0)]).unwrap();
        let opts = GraphScoreOptions {
            n_terms: 1,
            kind: LaplacianKind::Combinatorial,
            ..Default::default()
        };
        let f = score_graph(&g, &opts).unwrap();
        assert_eq!(f.values()[3], 0.0);
        // path component, λ = 1 with eigenvector ∝ (1, 0, −1)
        assert!((f.values()[0] - 1.0).abs() < 1e-12 && f.values()[1].abs() < 1e-12);
        let sym = GraphScoreOptions {
            n_terms: 1,
            ..Default::default()
        };
        assert!(matches!(score_graph(&g, &sym), Err(Error::IsolatedVertex(3))));
    }

    #[test]
    fn csv_round_trips() {
        let values = [0.1, 1.0 / 3.0, 2.5e-300, 12345.678901234567];
        let text = score_csv_string(&values);
        let parsed: Vec<f64> = text
            .lines()
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(parsed, values);
        assert!(text.starts_with("0,1.0000000000000001e-1\n"));
    }

    #[test]
    fn heatmap_scaling() {
        let img = parse_pgm(&heatmap_pgm_bytes(&[0.0, 0.5, 1.0, 1.0], 2, 2).unwrap()).unwrap();
        assert_eq!(img.to_pgm()[img.to_pgm().len() - 4..], [0, 128, 255, 255]);
        let flat = heatmap_pgm_bytes(&[2.0; 4], 2, 2).unwrap();
        assert!(flat.ends_with(&[128, 128, 128, 128]));
    }
}
