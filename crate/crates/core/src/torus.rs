//! Schrödinger operators `−Δ + V` on the circle `ℝ / 2πℤ` with a localized
//! negative well, and the position of the score minimum.
//!
//! The potential is `V(x) = 1 + ε φ((x − y)/ε)` on the window `[y, y + ε]`
//! and `1` elsewhere. Without the well the spectrum is `k² + 1`, doubly
//! degenerate for `k ≥ 1`; the well splits each pair into a cosine-like and a
//! sine-like branch centred on the window.

use std::f64::consts::PI;

use crate::eigen::{lanczos_smallest_with, EigenSolveReport, LanczosOptions, SymOperator};
use crate::error::{Error, Result};
use crate::spectral::{
    compute_score_field, find_strict_local_minima, score_with_policy, DegeneratePolicy, DomainTag,
    EigenPair, ScoreConfig, ScoreField, SpectralBasis, Topology, DEFAULT_DEGENERACY_TOL,
};

const TAU: f64 = 2.0 * PI;

pub const DEFAULT_N_GRID: usize = 512;

/// Negative profile `φ: [0, 1] → ℝ_{<0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bump {
    /// `φ ≡ −1`.
    #[default]
    ConstantWell,
    /// `φ(t) = −(0.6 + 0.4 cos 2πt)`.
    CosineWell,
}

impl Bump {
    pub fn profile(&self, t: f64) -> f64 {
        match self {
            Bump::ConstantWell => -1.0,
            Bump::CosineWell => -(0.6 + 0.4 * (TAU * t).cos()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Bump::ConstantWell => "constant",
            Bump::CosineWell => "cosine",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    y: f64,
    eps: f64,
    bump: Bump,
    weight: f64,
}

impl PotentialSpec {
    /// Window `[y, y + eps]` with `y` reduced into `[0, 2π)`.
    pub fn new(y: f64, eps: f64, bump: Bump) -> Result<Self> {
        if !y.is_finite() {
            return Err(Error::InvalidArgument(format!("window start {y} is not finite")));
        }
        if !(eps > 0.0 && eps < TAU) {
            return Err(Error::InvalidArgument(format!("window width {eps} outside (0, 2π)")));
        }
        Ok(Self {
            y: y.rem_euclid(TAU),
            eps,
            bump,
            weight: 1.0,
        })
    }

    /// Scales the well depth; weight 0 gives `V ≡ 1`.
    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn bump(&self) -> Bump {
        self.bump
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Offset of `x` from the window start, in `[0, 2π)`.
    fn offset(&self, x: f64) -> f64 {
        (x - self.y).rem_euclid(TAU)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.offset(x) <= self.eps * (1.0 + 1e-12)
    }

    pub fn potential(&self, x: f64) -> f64 {
        if self.contains(x) {
            let t = (self.offset(x) / self.eps).min(1.0);
            1.0 + self.weight * self.eps * self.bump.profile(t)
        } else {
            1.0
        }
    }
}

/// Second-difference discretization of `−Δ + V` on `n_grid` equispaced
/// points `x_i = 2πi / n_grid`.
#[derive(Debug, Clone)]
pub struct CircleOperator {
    pub n_grid: usize,
    pub h: f64,
    pub potential: Vec<f64>,
    pub operator: SymOperator,
}

impl CircleOperator {
    pub fn grid_point(&self, i: usize) -> f64 {
        grid_point(self.n_grid, i)
    }
}

pub fn grid_point(n_grid: usize, i: usize) -> f64 {
    TAU * i as f64 / n_grid as f64
}

pub fn build_circle_operator(n_grid: usize, spec: &PotentialSpec) -> Result<CircleOperator> {
    if n_grid < 64 {
        return Err(Error::InvalidArgument(format!("n_grid must be at least 64, got {n_grid}")));
    }
    let h = TAU / n_grid as f64;
    if spec.eps < 4.0 * h {
        return Err(Error::UnresolvedPerturbation { eps: spec.eps, h });
    }
    let potential: Vec<f64> = (0..n_grid).map(|i| spec.potential(grid_point(n_grid, i))).collect();
    let inv_h2 = 1.0 / (h * h);
    let mut triplets = Vec::with_capacity(2 * n_grid);
    for (i, v) in potential.iter().enumerate() {
        triplets.push((i, i, 2.0 * inv_h2 + v));
        if i + 1 < n_grid {
            triplets.push((i, i + 1, -inv_h2));
        } else {
            triplets.push((0, i, -inv_h2));
        }
    }
    Ok(CircleOperator {
        n_grid,
        h,
        potential,
        operator: SymOperator::from_triplets(n_grid, triplets)?,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusOptions {
    /// Include the ground mode in the sum (`2N + 1` pairs instead of the
    /// `2N` bifurcated ones).
    pub include_ground: bool,
    pub policy: DegeneratePolicy,
    pub tol: f64,
    pub seed: u64,
}

impl Default for TorusOptions {
    fn default() -> Self {
        Self {
            include_ground: false,
            policy: DegeneratePolicy::AsGiven,
            tol: 1e-9,
            seed: 0,
        }
    }
}

impl TorusOptions {
    fn first_pair(&self) -> usize {
        usize::from(!self.include_ground)
    }
}

fn check_pairs(n_grid: usize, n_pairs: usize) -> Result<()> {
    if n_pairs > n_grid / 8 {
        return Err(Error::InvalidArgument(format!(
            "N = {n_pairs} exceeds n_grid / 8 = {}",
            n_grid / 8
        )));
    }
    Ok(())
}

/// The `2N + 1` lowest eigenpairs, dense up to 2048 grid points.
fn solve(op: &CircleOperator, n_pairs: usize, opts: &TorusOptions) -> Result<EigenSolveReport> {
    let lanczos = LanczosOptions {
        dense_below: 2048,
        ..LanczosOptions::default()
    };
    let report = lanczos_smallest_with(&op.operator, 2 * n_pairs + 1, opts.tol, opts.seed, &lanczos)?;
    if !report.converged {
        log::warn!("circle eigensolve residual {:e} above tolerance", report.max_residual());
    }
    Ok(report)
}

fn basis_from(report: &EigenSolveReport, range: std::ops::Range<usize>) -> Result<SpectralBasis> {
    let pairs = report.pairs[range]
        .iter()
        .map(|p| EigenPair::new(p.value, p.vector.clone()))
        .collect::<Result<Vec<_>>>()?;
    SpectralBasis::new(pairs, DomainTag::CircleGrid, Some(0.0))
}

/// Score on the circle grid from the first `N` bifurcated eigenvalue pairs
/// (plus the ground mode if requested), sup-normalized.
pub fn torus_score(n_grid: usize, spec: &PotentialSpec, n_pairs: usize, opts: &TorusOptions) -> Result<ScoreField> {
    if n_pairs == 0 && !opts.include_ground {
        return Err(Error::NoEigenpairsSelected);
    }
    check_pairs(n_grid, n_pairs)?;
    let op = build_circle_operator(n_grid, spec)?;
    let report = solve(&op, n_pairs, opts)?;
    let basis = basis_from(&report, opts.first_pair()..2 * n_pairs + 1)?;
    let config = ScoreConfig::terms(basis.len()).with_policy(opts.policy);
    score_with_policy(&basis, &config, DEFAULT_DEGENERACY_TOL)
}

/// How a window hit is decided for each `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowCriterion {
    /// The grid argmin lies in the window.
    #[default]
    GlobalArgmin,
    /// Some strict local minimum of the periodic grid lies in the window.
    LocalMinimum,
}

/// Largest `N* ≤ n_max` such that the window criterion holds for every
/// `N ≤ N*` (0 if it already fails at `N = 1`).
pub fn find_n_eps(spec: &PotentialSpec, n_grid: usize, n_max: usize, opts: &TorusOptions) -> Result<usize> {
    find_n_eps_with(spec, n_grid, n_max, opts, WindowCriterion::GlobalArgmin)
}

pub fn find_n_eps_with(
    spec: &PotentialSpec,
    n_grid: usize,
    n_max: usize,
    opts: &TorusOptions,
    criterion: WindowCriterion,
) -> Result<usize> {
    if n_max == 0 {
        return Ok(0);
    }
    check_pairs(n_grid, n_max)?;
    let op = build_circle_operator(n_grid, spec)?;
    let report = solve(&op, n_max, opts)?;
    let topology = Topology::Adjacency(
        (0..n_grid)
            .map(|i| vec![(i + n_grid - 1) % n_grid, (i + 1) % n_grid])
            .collect(),
    );
    for n in 1..=n_max {
        let basis = basis_from(&report, opts.first_pair()..2 * n + 1)?;
        let config = ScoreConfig::terms(basis.len()).with_policy(opts.policy);
        let field = match opts.policy {
            DegeneratePolicy::AsGiven => compute_score_field(&basis, &config)?,
            _ => score_with_policy(&basis, &config, DEFAULT_DEGENERACY_TOL)?,
        };
        let hit = match criterion {
            WindowCriterion::GlobalArgmin => field
                .argmin()
                .is_some_and(|i| spec.contains(grid_point(n_grid, i))),
            WindowCriterion::LocalMinimum => find_strict_local_minima(field.values(), &topology)?
                .into_iter()
                .any(|i| spec.contains(grid_point(n_grid, i))),
        };
        if !hit {
            return Ok(n - 1);
        }
    }
    Ok(n_max)
}
