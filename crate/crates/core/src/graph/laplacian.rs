use super::Graph;
use crate::eigen::SymOperator;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianKind {
    /// `L = D − W`.
    Combinatorial,
    /// `I − D^{-1/2} W D^{-1/2}`.
    #[default]
    SymNormalized,
    /// `I − D^{-1} W`, solved through its symmetric similarity transform.
    RandomWalk,
}

/// A graph Laplacian as a symmetric operator.
///
/// For [`LaplacianKind::RandomWalk`] the operator is the symmetric
/// normalization and `rescale` holds `D^{-1/2}`: an eigenvector `u` of the
/// operator maps to the random-walk eigenvector `D^{-1/2} u`.
#[derive(Debug, Clone)]
pub struct Laplacian {
    pub operator: SymOperator,
    pub kind: LaplacianKind,
    pub rescale: Option<Vec<f64>>,
}

pub fn laplacian(g: &Graph, kind: LaplacianKind) -> Result<Laplacian> {
    if g.n_edges() == 0 {
        return Err(Error::InvalidGraph("graph has no edges".into()));
    }
    let n = g.n_vertices();
    let deg = g.degrees();
    let mut triplets = Vec::with_capacity(n + g.n_edges());
    let rescale = match kind {
        LaplacianKind::Combinatorial => {
            triplets.extend(deg.iter().enumerate().map(|(i, d)| (i, i, *d)));
            triplets.extend(g.edges().iter().map(|&(u, v, w)| (u, v, -w)));
            None
        }
        LaplacianKind::SymNormalized | LaplacianKind::RandomWalk => {
            if let Some(i) = deg.iter().position(|d| *d == 0.0) {
                return Err(Error::IsolatedVertex(i));
            }
            let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
            triplets.extend((0..n).map(|i| (i, i, 1.0)));
            triplets.extend(
                g.edges()
                    .iter()
                    .map(|&(u, v, w)| (u, v, -w * inv_sqrt[u] * inv_sqrt[v])),
            );
            (kind == LaplacianKind::RandomWalk).then_some(inv_sqrt)
        }
    };
    Ok(Laplacian {
        operator: SymOperator::from_triplets(n, triplets)?,
        kind,
        rescale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::dense_sym_eig;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn path_spectra() {
        let comb = laplacian(&path3(), LaplacianKind::Combinatorial).unwrap();
        let v = dense_sym_eig(&comb.operator).unwrap().values();
        for (a, b) in v.iter().zip([0.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        // normalized spectrum of P3 is {0, 1, 2}
        let sym = laplacian(&path3(), LaplacianKind::SymNormalized).unwrap();
        let v = dense_sym_eig(&sym.operator).unwrap().values();
        for (a, b) in v.iter().zip([0.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn row_sums_vanish() {
        let g = Graph::from_edges(4, [(0, 1, 0.5), (1, 2, 2.0), (2, 3, 1.0), (0, 3, 3.0)]).unwrap();
        let l = laplacian(&g, LaplacianKind::Combinatorial).unwrap();
        let mut y = vec![0.0; 4];
        l.operator.apply(&[1.0; 4], &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-15));
    }

    #[test]
    fn errors() {
        let g = Graph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        assert!(matches!(laplacian(&g, LaplacianKind::SymNormalized), Err(Error::IsolatedVertex(2))));
        assert!(laplacian(&g, LaplacianKind::Combinatorial).is_ok());
        let empty = Graph::from_edges(2, []).unwrap();
        assert!(matches!(laplacian(&empty, LaplacianKind::Combinatorial), Err(Error::InvalidGraph(_))));
    }
}
