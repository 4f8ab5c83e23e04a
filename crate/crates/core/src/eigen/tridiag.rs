//! Householder tridiagonalization and implicit-shift QL iteration.
//!
//! Ported from the EISPACK `tred2`/`tql2` pair by way of the public-domain
//! JAMA translation, with two changes: matrices are flat column-major slices
//! (so the inner loops run over contiguous memory), and the QL sweep can carry
//! columns of any length instead of the full transformation (the Lanczos
//! driver only needs the last row for residual estimates).

/// Reduces the symmetric n×n matrix in `v` to tridiagonal form. On return `v`
/// holds the orthogonal transformation in column-major order, `d` the diagonal
/// and `off` the off-diagonal (`off[i]` couples `i` and `i + 1`,
/// `off[n - 1] = 0`).
pub(crate) fn householder(v: &mut [f64], n: usize, d: &mut [f64], off: &mut [f64]) {
    debug_assert_eq!(v.len(), n * n);
    if n == 0 {
        return;
    }
    let e = off;
    let at = |i: usize, j: usize| j * n + i;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for x in &d[..i] {
            scale += x.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for x in &mut d[..i] {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;

    // shift to the "off[i] couples i and i+1" convention
    for i in 0..n - 1 {
        e[i] = e[i + 1];
    }
    e[n - 1] = 0.0;
}

/// Diagonalizes the symmetric tridiagonal matrix (`d`, `off`) in place.
///
/// `z` holds n columns of length `rows`, stored contiguously; every plane
/// rotation combines two of them, so passing the identity yields the
/// eigenvector matrix and passing a single unit row yields one row of it. On
/// return `d` holds the eigenvalues in ascending order and the columns of `z`
/// are permuted to match. Returns `false` if some eigenvalue needed more than
/// 60 sweeps.
pub(crate) fn ql_implicit(d: &mut [f64], off: &mut [f64], z: &mut [f64], rows: usize) -> bool {
    let n = d.len();
    debug_assert_eq!(off.len(), n);
    debug_assert_eq!(z.len(), rows * n);
    if n == 0 {
        return true;
    }
    let e = off;
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut converged = true;
    let mut f = 0.0;
    let mut tst1 = 0.0_f64;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    converged = false;
                    break;
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = z.split_at_mut((i + 1) * rows);
                    let zi = &mut left[i * rows..];
                    for (a, b) in zi.iter_mut().zip(&mut right[..rows]) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    let permuted: Vec<f64> = order
        .iter()
        .flat_map(|&i| z[i * rows..(i + 1) * rows].iter().copied())
        .collect();
    z.copy_from_slice(&permuted);
    converged
}
