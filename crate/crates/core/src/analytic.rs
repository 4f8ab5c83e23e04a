//! Closed-form scores on the interval and the unit square.
//!
//! With Dirichlet conditions the eigenfunctions of `[0, 1]` are `sin(kπx)`
//! with `λ_k = k²π²`, so (up to the constant factor `1/π`) the score is the
//! trigonometric series `Σ |sin kπx| / k`. On the square the eigenfunctions
//! are products and the natural truncation is the lattice disc
//! `m² + n² ≤ λ`.
//!
//! All sine evaluations go through [`frac_of_product`], which reduces `k·x`
//! modulo 1 with an error-free product so that cusps at rationals survive
//! `k` in the tens of thousands.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A reduced fraction `p/q` strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    p: u64,
    q: u64,
}

impl RationalPoint {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p == 0 || p >= q {
            return Err(Error::InvalidArgument(format!("{p}/{q} is not inside (0, 1)")));
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidArgument(format!("{p}/{q} is not reduced")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn value(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `frac(k·p/q)` computed exactly in integers.
    fn frac_multiple(&self, k: u64) -> f64 {
        ((k % self.q) * self.p % self.q) as f64 / self.q as f64
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Every reduced fraction with denominator `q`.
pub fn rationals_with_denominator(q: u64) -> Vec<RationalPoint> {
    (1..q)
        .filter(|&p| gcd(p, q) == 1)
        .map(|p| RationalPoint { p, q })
        .collect()
}

/// Fractional part of `k·x` in `[0, 1)`, carrying the rounding error of the
/// product (`k·x = hi + lo` exactly).
pub fn frac_of_product(k: u64, x: f64) -> f64 {
    let kf = k as f64;
    let hi = kf * x;
    let lo = kf.mul_add(x, -hi);
    let mut f = (hi - hi.floor()) + lo;
    if f < 0.0 {
        f += 1.0;
    }
    if f >= 1.0 {
        f -= 1.0;
    }
    f
}

/// `|sin(π f)|` for `f ∈ [0, 1)`, evaluated on the nearer half-period.
fn abs_sin_pi(f: f64) -> f64 {
    (PI * f.min(1.0 - f)).sin()
}

/// `Σ_{k=1}^{N} |sin(kπx)| / k`.
pub fn interval_score(x: f64, n_terms: u64) -> f64 {
    (1..=n_terms)
        .map(|k| abs_sin_pi(frac_of_product(k, x)) / k as f64)
        .sum()
}

/// [`interval_score`] at an exact rational, with `frac(k·p/q)` in integers.
pub fn interval_score_rational(pt: RationalPoint, n_terms: u64) -> f64 {
    (1..=n_terms)
        .map(|k| abs_sin_pi(pt.frac_multiple(k)) / k as f64)
        .sum()
}

fn lattice_bound(lambda_cut: f64) -> u64 {
    let l = lambda_cut.floor() as u64;
    let mut r = (l as f64).sqrt() as u64;
    while r * r > l {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= l {
        r += 1;
    }
    r
}

fn square_from_axes(sx: &[f64], sy: &[f64], lambda_cut: f64) -> f64 {
    let l = lambda_cut.floor() as u64;
    let mut total = 0.0;
    for m in 1..sx.len() as u64 {
        let rest = l - m * m;
        let n_max = lattice_bound(rest as f64);
        let xm = sx[m as usize];
        if xm == 0.0 {
            continue;
        }
        for n in 1..=n_max {
            total += xm * sy[n as usize] / ((m * m + n * n) as f64).sqrt();
        }
    }
    total
}

fn axis_samples(x: f64, count: u64) -> Vec<f64> {
    (0..=count).map(|k| abs_sin_pi(frac_of_product(k, x))).collect()
}

fn axis_samples_rational(pt: RationalPoint, count: u64) -> Vec<f64> {
    (0..=count).map(|k| abs_sin_pi(pt.frac_multiple(k))).collect()
}

/// `Σ_{m,n ≥ 1, m² + n² ≤ λ} |sin mπx| |sin nπy| / √(m² + n²)`.
pub fn square_score(x: f64, y: f64, lambda_cut: f64) -> f64 {
    let r = lattice_bound(lambda_cut);
    square_from_axes(&axis_samples(x, r), &axis_samples(y, r), lambda_cut)
}

/// Outcome of comparing the score at a point with its axis neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimumCheck {
    pub center: f64,
    /// Left/right in 1-D; `x−h, x+h, y−h, y+h` in 2-D.
    pub neighbors: Vec<f64>,
    pub holds: bool,
}

impl MinimumCheck {
    fn new(center: f64, neighbors: Vec<f64>) -> Self {
        let holds = neighbors.iter().all(|v| center < *v);
        Self {
            center,
            neighbors,
            holds,
        }
    }

    /// Smallest neighbor value minus the center value.
    pub fn margin(&self) -> f64 {
        self.neighbors.iter().fold(f64::INFINITY, |m, v| m.min(v - self.center))
    }
}

/// Cusp scale step `1/(8q²)`.
pub fn default_step(q: u64) -> f64 {
    1.0 / (8.0 * (q * q) as f64)
}

fn check_step(q: u64, h: f64) -> Result<()> {
    if !(h > 0.0 && h <= default_step(q)) {
        return Err(Error::InvalidArgument(format!(
            "step {h} must lie in (0, 1/(8q²)] = (0, {}]",
            default_step(q)
        )));
    }
    Ok(())
}

fn neighbors_in_range(x: f64, h: f64) -> Result<(f64, f64)> {
    let (lo, hi) = (x - h, x + h);
    if lo < 0.0 {
        return Err(Error::OutOfDomain(lo));
    }
    if hi > 1.0 {
        return Err(Error::OutOfDomain(hi));
    }
    Ok((lo, hi))
}

/// Tests whether `p/q` is a strict local minimum of the interval score with
/// `n_terms` terms against the neighbors `p/q ± h`.
pub fn check_rational_minimum(pt: RationalPoint, n_terms: u64, h: f64) -> Result<MinimumCheck> {
    check_step(pt.q, h)?;
    let (lo, hi) = neighbors_in_range(pt.value(), h)?;
    let center = interval_score_rational(pt, n_terms);
    Ok(MinimumCheck::new(
        center,
        vec![interval_score(lo, n_terms), interval_score(hi, n_terms)],
    ))
}

/// Two-dimensional analogue on the square with a lattice cutoff, comparing
/// against the four axis neighbors at distance `h`.
pub fn check_rational_minimum_2d(
    x: RationalPoint,
    y: RationalPoint,
    lambda_cut: f64,
    h: f64,
) -> Result<MinimumCheck> {
    if lambda_cut.is_nan() || lambda_cut < 2.0 {
        return Err(Error::InvalidArgument(format!("lambda cutoff {lambda_cut} below 2")));
    }
    check_step(x.q.max(y.q), h)?;
    let (xl, xh) = neighbors_in_range(x.value(), h)?;
    let (yl, yh) = neighbors_in_range(y.value(), h)?;
    let r = lattice_bound(lambda_cut);
    let sx = axis_samples_rational(x, r);
    let sy = axis_samples_rational(y, r);
    let center = square_from_axes(&sx, &sy, lambda_cut);
    let neighbors = vec![
        square_from_axes(&axis_samples(xl, r), &sy, lambda_cut),
        square_from_axes(&axis_samples(xh, r), &sy, lambda_cut),
        square_from_axes(&sx, &axis_samples(yl, r), lambda_cut),
        square_from_axes(&sx, &axis_samples(yh, r), lambda_cut),
    ];
    Ok(MinimumCheck::new(center, neighbors))
}

/// Smallest constant `C` from `candidates` (scanned in the given order) such
/// that the 2-D minimum test at `(1/q, y)` passes with `λ = C·q⁴` for every
/// `q` in `denominators`.
pub fn smallest_quartic_constant(
    denominators: &[u64],
    y: RationalPoint,
    candidates: &[f64],
) -> Result<Option<f64>> {
    for &c in candidates {
        let mut all = true;
        for &q in denominators {
            let x = RationalPoint::new(1, q)?;
            let lambda = (c * (q as f64).powi(4)).max(2.0);
            let h = default_step(q.max(y.q));
            if !check_rational_minimum_2d(x, y, lambda, h)?.holds {
                all = false;
                break;
            }
        }
        if all {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// `(1/n) Σ_{k=1}^{n} |sin kπy|`.
pub fn mean_abs_sin(y: f64, n: u64) -> f64 {
    let total: f64 = (1..=n).map(|k| abs_sin_pi(frac_of_product(k, y))).sum();
    total / n as f64
}

/// The period average `(1/q) Σ_{k=0}^{q−1} sin(kπ/q)`, the limit of
/// [`mean_abs_sin`] at any reduced `p/q`.
pub fn rational_mean_abs_sin(q: u64) -> Result<f64> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("denominator {q} below 2")));
    }
    let total: f64 = (0..q).map(|k| abs_sin_pi(k as f64 / q as f64)).sum();
    Ok(total / q as f64)
}

/// One period of a real sequence, extended periodically.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSequence {
    values: Vec<f64>,
    mean: f64,
}

impl PeriodicSequence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("period must be nonempty and finite".into()));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(Self { values, mean })
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Term `a_n`, 1-based.
    pub fn term(&self, n: usize) -> f64 {
        self.values[(n - 1) % self.values.len()]
    }

    fn abs_period_sum(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `|Σ_{n≤N} a_n b_n| ≤ (3 b_N / 2) Σ_{n=1}^{P} |a_n|` for a
/// zero-mean periodic `a` and positive nondecreasing `b`.
pub fn periodic_sum_bound(a: &PeriodicSequence, b: &[f64], n_terms: usize) -> Result<PeriodicBound> {
    let scale = a.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    if a.mean.abs() > 1e-12 * scale {
        return Err(Error::NonZeroMean(a.mean));
    }
    if n_terms == 0 || b.len() < n_terms {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= N <= len(b), got N = {n_terms}, len(b) = {}",
            b.len()
        )));
    }
    for (i, w) in b[..n_terms].iter().enumerate() {
        if !(w.is_finite() && *w > 0.0) || (i > 0 && *w < b[i - 1]) {
            return Err(Error::NonMonotoneWeights(i));
        }
    }
    let lhs = (1..=n_terms)
        .map(|n| a.term(n) * b[n - 1])
        .sum::<f64>()
        .abs();
    let rhs = 1.5 * b[n_terms - 1] * a.abs_period_sum();
    Ok(PeriodicBound {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// `Σ_{k=1}^{q} sgn(sin(kπp/q)) cos(kπp/q)`, which vanishes for coprime
/// `p, q`. The sign is decided in integers.
pub fn sign_cos_period_sum(pt: RationalPoint) -> f64 {
    let (p, q) = (pt.p, pt.q);
    (1..=q)
        .map(|k| {
            let r = (k * p) % (2 * q);
            let sign = if r == 0 || r == q {
                0.0
            } else if r < q {
                1.0
            } else {
                -1.0
            };
            sign * (PI * r as f64 / q as f64).cos()
        })
        .sum()
}

/// Distance from `x` to the nodal set `{j/k}` of `sin(kπx)`.
pub fn nodal_distance_interval(k: u64, x: f64) -> f64 {
    let f = frac_of_product(k, x);
    f.min(1.0 - f) / k as f64
}

/// `Σ_{k=1}^{N}` of [`nodal_distance_interval`].
pub fn nodal_distance_sum(x: f64, n_terms: u64) -> f64 {
    (1..=n_terms).map(|k| nodal_distance_interval(k, x)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(p: u64, q: u64) -> RationalPoint {
        RationalPoint::new(p, q).unwrap()
    }

    /// Naive reference without argument reduction.
    fn naive_interval(x: f64, n: u64) -> f64 {
        (1..=n).map(|k| (k as f64 * PI * x).sin().abs() / k as f64).sum()
    }

    #[test]
    fn interval_examples() {
        assert!((interval_score(0.5, 1) - 1.0).abs() < 1e-15);
        assert_eq!(interval_score(0.0, 1000), 0.0);
        assert!((interval_score(0.5, 3) - 4.0 / 3.0).abs() < 1e-15);
        for &x in &[0.1, 0.377, 0.5, 0.91] {
            assert!((interval_score(x, 200) - naive_interval(x, 200)).abs() < 1e-12);
        }
    }

    #[test]
    fn rational_and_float_paths_agree() {
        for (p, q) in [(1, 2), (5, 13), (3, 7)] {
            let pt = rp(p, q);
            let a = interval_score_rational(pt, 500);
            let b = interval_score(pt.value(), 500);
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn frac_reduction_is_accurate_for_large_k() {
        let x = 5.0 / 13.0;
        for k in [13_u64, 26_000, 49_997, 50_000] {
            let f = frac_of_product(k, x);
            let exact = ((k * 5) % 13) as f64 / 13.0;
            let err = (f - exact).abs().min((f - exact - 1.0).abs()).min((f - exact + 1.0).abs());
            assert!(err < 1e-11, "k={k}: {f} vs {exact}");
        }
    }

    #[test]
    fn square_examples() {
        let r2 = 1.0 / 2.0_f64.sqrt();
        assert!((square_score(0.5, 0.5, 2.0) - r2).abs() < 1e-15);
        assert!((square_score(0.5, 0.5, 5.0) - r2).abs() < 1e-15);
        for (x, y, l) in [(0.13, 0.71, 40.0), (0.5, 0.2, 123.5), (0.33, 0.9, 7.0)] {
            assert!((square_score(x, y, l) - square_score(y, x, l)).abs() < 1e-12);
        }
    }

    #[test]
    fn square_matches_brute_force() {
        let (x, y, l) = (0.31, 0.62, 97.0);
        let mut brute = 0.0;
        for m in 1..=20_u64 {
            for n in 1..=20_u64 {
                if (m * m + n * n) as f64 <= l {
                    brute += (m as f64 * PI * x).sin().abs() * (n as f64 * PI * y).sin().abs()
                        / ((m * m + n * n) as f64).sqrt();
                }
            }
        }
        assert!((square_score(x, y, l) - brute).abs() < 1e-12);
    }

    #[test]
    fn rational_minimum_examples() {
        assert!(check_rational_minimum(rp(1, 2), 4, 1e-3).unwrap().holds);
        // direct summation: f(1/3) = √3/2 while f(1/3 − 10⁻³) is smaller
        let c = check_rational_minimum(rp(1, 3), 1, 1e-3).unwrap();
        assert!(!c.holds);
        assert!((c.center - 3.0_f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(check_rational_minimum_2d(rp(1, 2), rp(1, 3), 4000.0, 1e-3).unwrap().holds);
    }

    #[test]
    fn rational_minimum_errors() {
        assert!(check_rational_minimum(rp(1, 2), 4, 0.1).is_err());
        assert!(check_rational_minimum(rp(1, 2), 4, 0.0).is_err());
        assert!(RationalPoint::new(2, 4).is_err());
        assert!(RationalPoint::new(3, 3).is_err());
        assert!(RationalPoint::new(0, 5).is_err());
    }

    #[test]
    fn mean_abs_sin_examples() {
        assert_eq!(mean_abs_sin(0.5, 2), 0.5);
        assert!((mean_abs_sin(0.5, 2000) - 0.5).abs() < 1e-12);
        assert_eq!(rational_mean_abs_sin(2).unwrap(), 0.5);
        assert!((rational_mean_abs_sin(3).unwrap() - 3.0_f64.sqrt() / 3.0).abs() < 1e-15);
        assert!((rational_mean_abs_sin(4).unwrap() - (1.0 + 2.0_f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!(rational_mean_abs_sin(1).is_err());
    }

    #[test]
    fn periodic_bound_examples() {
        let a = PeriodicSequence::new(vec![1.0, -1.0]).unwrap();
        let b = vec![1.0; 10];
        let r = periodic_sum_bound(&a, &b, 7).unwrap();
        assert_eq!((r.lhs, r.rhs, r.holds), (1.0, 3.0, true));
        for n in 1..=10 {
            let r = periodic_sum_bound(&a, &b, n).unwrap();
            assert_eq!(r.lhs, if n % 2 == 1 { 1.0 } else { 0.0 });
        }
        let skew = PeriodicSequence::new(vec![1.0, 0.5]).unwrap();
        assert!(matches!(periodic_sum_bound(&skew, &b, 3), Err(Error::NonZeroMean(_))));
        assert!(matches!(
            periodic_sum_bound(&a, &[1.0, 2.0, 1.5], 3),
            Err(Error::NonMonotoneWeights(2))
        ));
    }

    #[test]
    fn sign_cos_examples() {
        for (p, q) in [(1, 2), (1, 3), (3, 7)] {
            assert!(sign_cos_period_sum(rp(p, q)).abs() < 1e-12);
        }
    }

    #[test]
    fn nodal_distance_examples() {
        assert!((nodal_distance_interval(1, 0.5) - 0.5).abs() < 1e-15);
        assert!((nodal_distance_interval(2, 0.3) - 0.2).abs() < 1e-15);
        assert!(nodal_distance_interval(5, 0.4) < 1e-16);
        assert_eq!(nodal_distance_sum(0.0, 50), 0.0);
        assert!((nodal_distance_sum(0.5, 2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lattice_bound_is_exact() {
        assert_eq!(lattice_bound(2.0), 1);
        assert_eq!(lattice_bound(4.0), 2);
        assert_eq!(lattice_bound(4000.0), 63);
        assert_eq!(lattice_bound(3.99), 1);
    }
}
