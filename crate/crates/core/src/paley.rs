//! Paley graphs and the closed-form score at their vertices.
//!
//! For a prime `p ≡ 1 (mod 4)` the Paley graph joins `a` and `b` when `a − b`
//! is a nonzero square mod `p`. Its Laplacian is diagonalized by the additive
//! characters `e_k(j) = e^{2πijk/p}`: `e_0` spans the kernel, and `e_k` has
//! eigenvalue `(p − √p)/2` or `(p + √p)/2` according as `k` is a residue or
//! not. Summing `λ_k^{-1/2} e_k` over `k ≠ 0` gives a score that is constant
//! on each of the classes `{0}`, residues and nonresidues.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eigen::dense_sym_eig;
use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph, LaplacianKind};
use crate::spectral::{dot, group_values, DEFAULT_DEGENERACY_TOL};

/// Largest prime accepted by the numerical cross-check.
pub const MAX_NUMERIC_PRIME: u64 = 2000;

const EIGENSPACE_TOL: f64 = 1e-8;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Euler's criterion: `a^{(p−1)/2} ≡ 1 (mod p)`.
pub fn is_quadratic_residue(a: u64, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if a.is_multiple_of(p) {
        return Err(Error::ZeroResidueClass);
    }
    if p == 2 {
        return Ok(true);
    }
    Ok(pow_mod(a, (p - 1) / 2, p) == 1)
}

fn check_paley_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::RelationNotSymmetric(p));
    }
    Ok(())
}

/// Residue flags for `0..p` (index 0 is `false`).
fn residue_table(p: u64) -> Vec<bool> {
    let mut table = vec![false; p as usize];
    for x in 1..p {
        table[(x * x % p) as usize] = true;
    }
    table
}

/// The Paley graph on `Z/pZ` with unit weights.
pub fn paley_graph(p: u64) -> Result<Graph> {
    check_paley_prime(p)?;
    let res = residue_table(p);
    let n = p as usize;
    let edges = (0..n).flat_map(|a| {
        let res = &res;
        ((a + 1)..n)
            .filter(move |b| res[b - a])
            .map(move |b| (a, b, 1.0))
    });
    Graph::from_edges(n, edges)
}

/// The two nonzero Laplacian eigenvalues `((p − √p)/2, (p + √p)/2)`, each of
/// multiplicity `(p − 1)/2`.
pub fn paley_spectrum(p: u64) -> Result<(f64, f64)> {
    check_paley_prime(p)?;
    let (pf, r) = (p as f64, (p as f64).sqrt());
    Ok(((pf - r) / 2.0, (pf + r) / 2.0))
}

/// Score values on `Z/pZ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PaleyScore {
    pub p: u64,
    pub s_zero: Complex64,
    pub s_residue: Complex64,
    pub s_nonresidue: Complex64,
    pub per_vertex: Vec<Complex64>,
}

impl PaleyScore {
    /// Distinct per-vertex values, merging those within `tol`.
    pub fn distinct_values(&self, tol: f64) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for v in &self.per_vertex {
            if !out.iter().any(|u| (u - v).norm() <= tol) {
                out.push(*v);
            }
        }
        out
    }
}

/// `e^{2πi·jk/p}` with the exponent reduced mod `p` in integers.
fn character(j: u64, k: u64, p: u64) -> Complex64 {
    let r = (j % p) * (k % p) % p;
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / p as f64)
}

fn assemble(p: u64, lambda_of: impl Fn(u64) -> f64) -> PaleyScore {
    let weights: Vec<f64> = (0..p)
        .map(|k| if k == 0 { 0.0 } else { lambda_of(k).powf(-0.5) })
        .collect();
    let per_vertex: Vec<Complex64> = (0..p)
        .map(|j| (1..p).map(|k| weights[k as usize] * character(j, k, p)).sum())
        .collect();
    let res = residue_table(p);
    let first_non = (1..p).find(|&j| !res[j as usize]).expect("p > 2 has a nonresidue");
    PaleyScore {
        p,
        s_zero: per_vertex[0],
        s_residue: per_vertex[1],
        s_nonresidue: per_vertex[first_non as usize],
        per_vertex,
    }
}

/// Closed-form score from the Gauss sums `(−1 ± √p)/2`.
pub fn paley_score_closed_form(p: u64) -> Result<PaleyScore> {
    let (lo, hi) = paley_spectrum(p)?;
    let r = (p as f64).sqrt();
    let g_res = Complex64::new((r - 1.0) / 2.0, 0.0);
    let g_non = Complex64::new((-r - 1.0) / 2.0, 0.0);
    let (wl, wh) = (lo.powf(-0.5), hi.powf(-0.5));
    let s_zero = Complex64::new((p - 1) as f64 / 2.0 * (wl + wh), 0.0);
    let s_residue = g_res * wl + g_non * wh;
    let s_nonresidue = g_non * wl + g_res * wh;
    let res = residue_table(p);
    let per_vertex = (0..p as usize)
        .map(|j| match j {
            0 => s_zero,
            j if res[j] => s_residue,
            _ => s_nonresidue,
        })
        .collect();
    Ok(PaleyScore {
        p,
        s_zero,
        s_residue,
        s_nonresidue,
        per_vertex,
    })
}

/// Numerical score: diagonalizes the Laplacian densely, confirms that every
/// character `e_k`, `k ≠ 0`, lies in one computed eigenspace (projection
/// residual at most `1e-8`), and sums with that eigenspace's eigenvalue.
pub fn paley_score_numeric(p: u64) -> Result<PaleyScore> {
    check_paley_prime(p)?;
    if p > MAX_NUMERIC_PRIME {
        return Err(Error::InvalidArgument(format!(
            "numerical Paley check limited to p <= {MAX_NUMERIC_PRIME}, got {p}"
        )));
    }
    let g = paley_graph(p)?;
    let lap = laplacian(&g, LaplacianKind::Combinatorial)?;
    let report = dense_sym_eig(&lap.operator)?;
    let values = report.values();
    let groups = group_values(&values, DEFAULT_DEGENERACY_TOL);
    let n = p as usize;
    let scale = (p as f64).sqrt();

    let spaces: Vec<(f64, Vec<&[f64]>)> = groups
        .groups()
        .iter()
        .map(|g| {
            let mean = values[g.clone()].iter().sum::<f64>() / g.len() as f64;
            let vecs = report.pairs[g.clone()].iter().map(|p| p.vector.as_slice()).collect();
            (mean, vecs)
        })
        .filter(|(mean, _)| *mean > 1e-9 * p as f64)
        .collect();

    let mut lambda = vec![0.0; n];
    for k in 1..p {
        let re: Vec<f64> = (0..p).map(|j| character(j, k, p).re / scale).collect();
        let im: Vec<f64> = (0..p).map(|j| character(j, k, p).im / scale).collect();
        let mut best = f64::INFINITY;
        for (value, vecs) in &spaces {
            let residual = (projection_residual2(&re, vecs) + projection_residual2(&im, vecs)).sqrt();
            if residual < best {
                best = residual;
                lambda[k as usize] = *value;
            }
        }
        if best > EIGENSPACE_TOL {
            return Err(Error::EigenspaceMismatch(best));
        }
    }
    Ok(assemble(p, |k| lambda[k as usize]))
}

/// `‖x − Q Qᵀ x‖²` for orthonormal columns `Q`.
fn projection_residual2(x: &[f64], q: &[&[f64]]) -> f64 {
    let mut r = x.to_vec();
    for v in q {
        let c = dot(v, x);
        r.iter_mut().zip(v.iter()).for_each(|(ri, vi)| *ri -= c * vi);
    }
    dot(&r, &r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residues_mod_13() {
        let res: Vec<u64> = (1..13).filter(|&a| is_quadratic_residue(a, 13).unwrap()).collect();
        assert_eq!(res, vec![1, 3, 4, 9, 10, 12]);
        assert!(matches!(is_quadratic_residue(0, 13), Err(Error::ZeroResidueClass)));
        assert!(matches!(is_quadratic_residue(2, 15), Err(Error::NotPrime(15))));
    }

    #[test]
    fn graph_shape() {
        let g = paley_graph(13).unwrap();
        assert_eq!(g.n_edges(), 13 * 6 / 2);
        assert!(g.degrees().iter().all(|d| *d == 6.0));
        assert!(matches!(paley_graph(7), Err(Error::RelationNotSymmetric(7))));
        assert!(matches!(paley_graph(21), Err(Error::NotPrime(21))));
    }

    #[test]
    fn closed_form_p13() {
        let s = paley_score_closed_form(13).unwrap();
        let (lo, hi) = paley_spectrum(13).unwrap();
        let want_zero = 6.0 * (lo.powf(-0.5) + hi.powf(-0.5));
        assert!((s.s_zero.re - want_zero).abs() < 1e-12);
        assert!((s.s_zero.re - 4.8507).abs() < 1e-4);
        assert!((s.s_residue.re + 0.1981).abs() < 1e-4);
        assert!((s.s_nonresidue.re + 0.6104).abs() < 1e-4);
        assert_eq!(s.distinct_values(1e-9).len(), 3);
    }

    #[test]
    fn numeric_matches_closed_form() {
        for p in [5, 13, 17, 29] {
            let a = paley_score_closed_form(p).unwrap();
            let b = paley_score_numeric(p).unwrap();
            for (x, y) in a.per_vertex.iter().zip(&b.per_vertex) {
                assert!((x - y).norm() < 1e-9, "p={p}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn direct_gauss_sums() {
        for p in [5_u64, 13, 37] {
            let res = residue_table(p);
            let g_res: Complex64 = (1..p).filter(|&k| res[k as usize]).map(|k| character(1, k, p)).sum();
            assert!((g_res.re - ((p as f64).sqrt() - 1.0) / 2.0).abs() < 1e-12);
            assert!(g_res.im.abs() < 1e-12);
        }
    }
}
