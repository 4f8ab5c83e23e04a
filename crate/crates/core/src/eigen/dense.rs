use super::tridiag::{householder, ql_implicit};
use super::{fix_sign, EigenSolveReport, SolvedPair, SymOperator};
use crate::error::{Error, Result};

/// Largest dimension accepted by the dense solver.
pub const MAX_DENSE_DIM: usize = 4096;

const DENSE_RESIDUAL_TOL: f64 = 1e-10;

/// Full eigendecomposition by Householder tridiagonalization followed by
/// implicit-shift QL.
///
/// `converged` is false when the QL sweep hit its iteration cap or some
/// residual exceeds `1e-10`; the pairs are returned either way.
pub fn dense_sym_eig(op: &SymOperator) -> Result<EigenSolveReport> {
    let n = op.dim();
    if n > MAX_DENSE_DIM {
        return Err(Error::InvalidArgument(format!(
            "dense solver limited to dimension {MAX_DENSE_DIM}, got {n}"
        )));
    }
    let mut v = op.to_dense();
    let mut d = vec![0.0; n];
    let mut off = vec![0.0; n];
    householder(&mut v, n, &mut d, &mut off);
    let ql_ok = ql_implicit(&mut d, &mut off, &mut v, n);

    let pairs: Vec<SolvedPair> = (0..n)
        .map(|j| {
            let mut vector = v[j * n..(j + 1) * n].to_vec();
            fix_sign(&mut vector);
            SolvedPair { value: d[j], vector }
        })
        .collect();
    let residuals: Vec<f64> = pairs.iter().map(|p| op.residual(p.value, &p.vector)).collect();
    let converged = ql_ok && residuals.iter().all(|r| *r <= DENSE_RESIDUAL_TOL);
    Ok(EigenSolveReport {
        pairs,
        residuals,
        iterations: 1,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::dot;

    fn solve(n: usize, a: Vec<f64>) -> EigenSolveReport {
        let r = dense_sym_eig(&SymOperator::dense(n, a).unwrap()).unwrap();
        assert!(r.converged);
        r
    }

    #[test]
    fn two_by_two() {
        let r = solve(2, vec![2.0, 1.0, 1.0, 2.0]);
        let v = r.values();
        assert!((v[0] - 1.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn identity_has_full_multiplicity() {
        let n = 5;
        let mut a = vec![0.0; n * n];
        (0..n).for_each(|i| a[i * n + i] = 1.0);
        let r = solve(n, a);
        assert!(r.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
    }

    #[test]
    fn path_laplacian() {
        // characteristic polynomial of the P3 Laplacian: -t (t - 1)(t - 3)
        let r = solve(3, vec![1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0]);
        for (got, want) in r.values().iter().zip([0.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
        // λ = 1 eigenvector ∝ (1, 0, -1), positive at its largest entry
        let v = &r.pairs[1].vector;
        assert!((v[0] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!(v[1].abs() < 1e-14);
    }

    #[test]
    fn orthonormal_vectors_and_small_residuals() {
        let n = 40;
        let a: Vec<f64> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                (((i * j + 3 * (i + j)) % 17) as f64 - 8.0) / 5.0
            })
            .collect();
        let r = solve(n, a);
        for i in 0..n {
            for j in 0..n {
                let d = dot(&r.pairs[i].vector, &r.pairs[j].vector);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12);
            }
        }
        assert!(r.max_residual() < 1e-12);
        assert!(r.values().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn one_by_one() {
        let r = solve(1, vec![-3.5]);
        assert_eq!(r.values(), vec![-3.5]);
        assert_eq!(r.pairs[0].vector, vec![1.0]);
    }
}
