//! Lanczos iteration for the lower end of a symmetric spectrum.
//!
//! The recurrence runs on `B = σI − A` with `σ` the Gershgorin bound of `A`,
//! so the largest (fastest converging) Ritz values of `B` correspond to the
//! smallest eigenvalues of `A`. Every new Lanczos vector is orthogonalized
//! twice against all previous ones. When the Krylov space becomes invariant
//! before enough pairs have converged, the iteration continues from a fresh
//! seeded vector orthogonal to everything so far.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tridiag::ql_implicit;
use super::{dense_sym_eig, fix_sign, EigenSolveReport, SolvedPair, SymOperator};
use crate::error::{Error, Result};
use crate::spectral::{axpy, dot};

#[derive(Debug, Clone, PartialEq)]
pub struct LanczosOptions {
    /// Operators of dimension up to this are solved densely.
    pub dense_below: usize,
    /// Restarts allowed after an invariant subspace is hit.
    pub max_restarts: usize,
    /// Cap on the Krylov dimension (defaults to the operator dimension).
    pub max_dim: Option<usize>,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            dense_below: 512,
            max_restarts: 5,
            max_dim: None,
        }
    }
}

/// The `m` smallest eigenpairs of `op`, each with residual at most
/// `tol · max(1, ‖A‖_∞)` when `converged` is set.
pub fn lanczos_smallest(op: &SymOperator, m: usize, tol: f64, seed: u64) -> Result<EigenSolveReport> {
    lanczos_smallest_with(op, m, tol, seed, &LanczosOptions::default())
}

pub fn lanczos_smallest_with(
    op: &SymOperator,
    m: usize,
    tol: f64,
    seed: u64,
    options: &LanczosOptions,
) -> Result<EigenSolveReport> {
    let n = op.dim();
    if m == 0 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "need 0 < m < n, got m = {m} for dimension {n}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if n <= options.dense_below {
        let mut report = dense_sym_eig(op)?;
        report.pairs.truncate(m);
        report.residuals.truncate(m);
        report.converged = report.residuals.iter().all(|r| *r <= tol);
        return Ok(report);
    }
    Lanczos::new(op, m, tol, seed, options).run()
}

struct Lanczos<'a> {
    op: &'a SymOperator,
    m: usize,
    tol: f64,
    shift: f64,
    scale: f64,
    max_dim: usize,
    max_restarts: usize,
    rng: ChaCha8Rng,
    basis: Vec<Vec<f64>>,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

struct RitzCheck {
    converged: bool,
    pairs: Vec<SolvedPair>,
    residuals: Vec<f64>,
}

impl<'a> Lanczos<'a> {
    fn new(op: &'a SymOperator, m: usize, tol: f64, seed: u64, options: &LanczosOptions) -> Self {
        let n = op.dim();
        Self {
            op,
            m,
            tol,
            shift: op.gershgorin_bound(),
            scale: op.inf_norm().max(1.0),
            max_dim: options.max_dim.unwrap_or(n).clamp(m + 1, n),
            max_restarts: options.max_restarts,
            rng: ChaCha8Rng::seed_from_u64(seed),
            basis: Vec::new(),
            alpha: Vec::new(),
            beta: Vec::new(),
        }
    }

    /// `y = (σI − A) x`.
    fn apply_shifted(&self, x: &[f64], y: &mut [f64]) {
        self.op.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = self.shift * xi - *yi;
        }
    }

    fn orthogonalize(&self, w: &mut [f64]) {
        for _ in 0..2 {
            for q in &self.basis {
                let c = dot(w, q);
                axpy(-c, q, w);
            }
        }
    }

    /// A seeded random unit vector orthogonal to the current basis, or `None`
    /// if the basis already spans (numerically) everything.
    fn fresh_vector(&mut self) -> Option<Vec<f64>> {
        let n = self.op.dim();
        for _ in 0..3 {
            let mut v: Vec<f64> = (0..n).map(|_| self.rng.gen::<f64>() - 0.5).collect();
            let before = dot(&v, &v).sqrt();
            self.orthogonalize(&mut v);
            let norm = dot(&v, &v).sqrt();
            if norm > 1e-8 * before {
                v.iter_mut().for_each(|x| *x /= norm);
                return Some(v);
            }
        }
        None
    }

    fn run(mut self) -> Result<EigenSolveReport> {
        let n = self.op.dim();
        let breakdown_tol = 1e-10 * self.shift.abs().max(self.scale);
        let mut restarts = 0;
        let mut q = self.fresh_vector().expect("empty basis always admits a start vector");
        let mut w = vec![0.0; n];
        let mut next_check = self.m.max(2);
        let mut last: Option<RitzCheck> = None;

        loop {
            self.apply_shifted(&q, &mut w);
            let a = dot(&w, &q);
            axpy(-a, &q, &mut w);
            if let (Some(&b), Some(prev)) = (self.beta.last(), self.basis.last()) {
                axpy(-b, prev, &mut w);
            }
            self.basis.push(q);
            self.alpha.push(a);
            self.orthogonalize(&mut w);
            let b = dot(&w, &w).sqrt();
            let k = self.basis.len();
            let exhausted = k >= self.max_dim;
            let invariant = b <= breakdown_tol;

            if k >= self.m && (k >= next_check || exhausted || invariant) {
                let residual_b = if invariant { 0.0 } else { b };
                if let Some(check) = self.check(residual_b) {
                    if check.converged || exhausted {
                        return Ok(self.report(check));
                    }
                    last = Some(check);
                }
                next_check = k + (k / 10).max(5);
            }
            if exhausted {
                let check = last.unwrap_or_else(|| self.ritz_pairs(self.basis.len().min(self.m)));
                return Ok(self.report(check));
            }

            if invariant {
                restarts += 1;
                if restarts > self.max_restarts {
                    return Err(Error::LanczosBreakdown(self.max_restarts));
                }
                match self.fresh_vector() {
                    Some(v) => {
                        self.beta.push(0.0);
                        q = v;
                    }
                    None => {
                        let check = self.ritz_pairs(self.m);
                        return Ok(self.report(check));
                    }
                }
            } else {
                self.beta.push(b);
                q = w.iter().map(|x| x / b).collect();
            }
        }
    }

    /// Cheap convergence test from the last row of the tridiagonal
    /// eigenvector matrix; on success, forms the Ritz vectors and checks the
    /// true residuals.
    fn check(&self, next_beta: f64) -> Option<RitzCheck> {
        let k = self.alpha.len();
        let mut d = self.alpha.clone();
        let mut off = self.beta.clone();
        off.resize(k, 0.0);
        let mut last_row = vec![0.0; k];
        last_row[k - 1] = 1.0;
        ql_implicit(&mut d, &mut off, &mut last_row, 1);
        // wanted: the m largest eigenvalues of B, at the end of the sorted list
        let estimates_ok = (k - self.m..k).all(|i| (next_beta * last_row[i]).abs() <= 0.1 * self.tol * self.scale);
        if !estimates_ok {
            return None;
        }
        let check = self.ritz_pairs(self.m);
        Some(check)
    }

    fn ritz_pairs(&self, count: usize) -> RitzCheck {
        let k = self.alpha.len();
        let n = self.op.dim();
        let mut d = self.alpha.clone();
        let mut off = self.beta.clone();
        off.resize(k, 0.0);
        let mut z = vec![0.0; k * k];
        (0..k).for_each(|i| z[i * k + i] = 1.0);
        ql_implicit(&mut d, &mut off, &mut z, k);

        let mut av = vec![0.0; n];
        let mut pairs = Vec::with_capacity(count);
        let mut residuals = Vec::with_capacity(count);
        for col in (k - count..k).rev() {
            let mut y = vec![0.0; n];
            for (row, qv) in self.basis.iter().enumerate() {
                axpy(z[col * k + row], qv, &mut y);
            }
            let norm = dot(&y, &y).sqrt();
            y.iter_mut().for_each(|x| *x /= norm);
            fix_sign(&mut y);
            self.op.apply(&y, &mut av);
            let value = dot(&y, &av);
            residuals.push(self.op.residual(value, &y));
            pairs.push(SolvedPair { value, vector: y });
        }
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.sort_by(|&a, &b| pairs[a].value.total_cmp(&pairs[b].value));
        let pairs: Vec<SolvedPair> = order.iter().map(|&i| pairs[i].clone()).collect();
        let residuals: Vec<f64> = order.iter().map(|&i| residuals[i]).collect();
        let converged = residuals.iter().all(|r| *r <= self.tol);
        RitzCheck {
            converged,
            pairs,
            residuals,
        }
    }

    fn report(&self, check: RitzCheck) -> EigenSolveReport {
        EigenSolveReport {
            pairs: check.pairs,
            residuals: check.residuals,
            iterations: self.alpha.len(),
            converged: check.converged,
        }
    }
}
