//! Symmetric eigensolvers for Laplacian-like operators.
//!
//! [`dense_sym_eig`] returns the full spectrum; [`lanczos_smallest`] extracts
//! the lower end of a sparse operator. Both return eigenvectors with unit
//! Euclidean norm, signed so that the entry of largest magnitude is positive.

mod dense;
mod lanczos;
pub(crate) mod tridiag;

pub use dense::dense_sym_eig;
pub use lanczos::{lanczos_smallest, lanczos_smallest_with, LanczosOptions};

use crate::error::{Error, Result};
use crate::spectral::{DomainTag, EigenPair, SpectralBasis, DEFAULT_DROP_FACTOR};

/// Compressed sparse rows, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    fn spmv(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.row(i).map(|(j, a)| a * x[j]).sum();
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    /// Row-major n×n.
    Dense(Vec<f64>),
    Sparse(CsrMatrix),
}

/// A real symmetric operator together with cheap spectral bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SymOperator {
    n: usize,
    repr: Representation,
    gershgorin_bound: f64,
    inf_norm: f64,
}

impl SymOperator {
    /// Wraps a row-major dense matrix. Entries must be symmetric to within
    /// `1e-12 · max(1, max|a_ij|)`; the stored matrix is the exact
    /// symmetrization.
    pub fn dense(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "dense operator of dimension {n} needs {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite matrix entry".into()));
        }
        let scale = data.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (data[i * n + j], data[j * n + i]);
                let gap = (a - b).abs();
                if gap > 1e-12 * scale {
                    return Err(Error::NotSymmetric { row: i, col: j, gap });
                }
                let mean = 0.5 * (a + b);
                data[i * n + j] = mean;
                data[j * n + i] = mean;
            }
        }
        let (gershgorin_bound, inf_norm) = bounds((0..n).map(|i| {
            let row = &data[i * n..(i + 1) * n];
            (row[i], row.iter().map(|v| v.abs()).sum::<f64>() - row[i].abs())
        }));
        Ok(Self {
            n,
            repr: Representation::Dense(data),
            gershgorin_bound,
            inf_norm,
        })
    }

    /// Builds a sparse operator from upper-triangle triplets `(i, j, a)` with
    /// `i <= j`. Repeated positions are summed; the lower triangle is implied.
    pub fn from_triplets(n: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("operator dimension must be positive".into()));
        }
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, a) in triplets {
            if i > j {
                return Err(Error::InvalidArgument(format!(
                    "triplet ({i}, {j}) is below the diagonal"
                )));
            }
            if j >= n {
                return Err(Error::InvalidArgument(format!("index {j} out of range for dimension {n}")));
            }
            if !a.is_finite() {
                return Err(Error::InvalidArgument("non-finite matrix entry".into()));
            }
            entries.push((i, j, a));
            if i != j {
                entries.push((j, i, a));
            }
        }
        entries.sort_by_key(|a| (a.0, a.1));

        let mut row_ptr = vec![0; n + 1];
        let mut col_idx = Vec::with_capacity(entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, a) in entries {
            if last == Some((i, j)) {
                *values.last_mut().expect("previous entry exists") += a;
            } else {
                col_idx.push(j);
                values.push(a);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let csr = CsrMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        };
        let (gershgorin_bound, inf_norm) = bounds((0..n).map(|i| {
            let (mut diag, mut off) = (0.0, 0.0);
            for (j, a) in csr.row(i) {
                if j == i {
                    diag += a;
                } else {
                    off += a.abs();
                }
            }
            (diag, off)
        }));
        Ok(Self {
            n,
            repr: Representation::Sparse(csr),
            gershgorin_bound,
            inf_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Representation::Dense(_))
    }

    /// Upper bound on the spectrum from Gershgorin discs.
    pub fn gershgorin_bound(&self) -> f64 {
        self.gershgorin_bound
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.inf_norm
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        match &self.repr {
            Representation::Dense(a) => {
                for (yi, row) in y.iter_mut().zip(a.chunks_exact(self.n)) {
                    *yi = row.iter().zip(x).map(|(a, b)| a * b).sum();
                }
            }
            Representation::Sparse(csr) => csr.spmv(x, y),
        }
    }

    /// Row-major dense copy.
    pub fn to_dense(&self) -> Vec<f64> {
        match &self.repr {
            Representation::Dense(a) => a.clone(),
            Representation::Sparse(csr) => {
                let mut a = vec![0.0; self.n * self.n];
                for i in 0..self.n {
                    for (j, v) in csr.row(i) {
                        a[i * self.n + j] = v;
                    }
                }
                a
            }
        }
    }

    /// `‖A v − λ v‖₂ / max(1, ‖A‖_∞)`.
    pub fn residual(&self, value: f64, vector: &[f64]) -> f64 {
        let mut av = vec![0.0; self.n];
        self.apply(vector, &mut av);
        let r: f64 = av
            .iter()
            .zip(vector)
            .map(|(a, v)| (a - value * v).powi(2))
            .sum::<f64>()
            .sqrt();
        r / self.inf_norm.max(1.0)
    }
}

fn bounds(rows: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let mut upper = f64::NEG_INFINITY;
    let mut norm = 0.0_f64;
    for (diag, off) in rows {
        upper = upper.max(diag + off);
        norm = norm.max(diag.abs() + off);
    }
    (upper, norm)
}

/// An eigenvalue with its unit eigenvector, as produced by a solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvedPair {
    pub value: f64,
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolveReport {
    /// Sorted by ascending eigenvalue.
    pub pairs: Vec<SolvedPair>,
    /// `‖Av − λv‖ / max(1, ‖A‖_∞)` per pair.
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl EigenSolveReport {
    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(*r))
    }

    /// Converts to a [`SpectralBasis`], dropping every pair whose value falls
    /// below `drop_tolerance` (default: `1e-9` times `lambda_max_estimate`).
    pub fn into_basis(
        self,
        domain: DomainTag,
        lambda_max_estimate: f64,
        drop_tolerance: Option<f64>,
    ) -> Result<SpectralBasis> {
        let tol = drop_tolerance.unwrap_or(DEFAULT_DROP_FACTOR * lambda_max_estimate.abs());
        let pairs = self
            .pairs
            .into_iter()
            .filter(|p| p.value >= tol)
            .map(|p| EigenPair::new(p.value, p.vector))
            .collect::<Result<Vec<_>>>()?;
        SpectralBasis::new(pairs, domain, Some(tol))
    }
}

/// Flips `v` so that its entry of largest magnitude (first on ties) is
/// positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).is_some_and(|x| *x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}
