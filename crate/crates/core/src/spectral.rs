//! The nodal anomaly score and the machinery around it.
//!
//! For an ordered family of eigenpairs `(λ_k, φ_k)` sampled on a finite point
//! set, the score at a point `x` is
//!
//! ```text
//! f_N(x) = Σ_{k ≤ N} λ_k^{-1/2} · |φ_k(x)| / ‖φ_k‖_∞
//! ```
//!
//! Each term is a rescaled distance-to-nodal-set proxy; see [`nodal_proxy`].
//! Nothing here computes eigenpairs; callers hand in a [`SpectralBasis`]
//! produced by the `eigen` module or by a closed form.

use std::f64::consts::PI;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Relative gap below which two eigenvalues are treated as one eigenspace.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;

/// Relative drop threshold for trivial modes (times the largest eigenvalue).
pub const DEFAULT_DROP_FACTOR: f64 = 1e-9;

const MAX_ROTATION_REJECTIONS: usize = 100;

/// One eigenvalue with its eigenvector samples and cached sup norm.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    value: f64,
    vector: Vec<f64>,
    sup_norm: f64,
}

impl EigenPair {
    pub fn new(value: f64, vector: Vec<f64>) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidEigenpair(format!(
                "eigenvalue must be finite and nonnegative, got {value}"
            )));
        }
        if vector.is_empty() {
            return Err(Error::InvalidEigenpair("empty eigenvector".into()));
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidEigenpair("non-finite eigenvector sample".into()));
        }
        let sup_norm = sup_norm(&vector);
        if sup_norm <= 0.0 {
            return Err(Error::InvalidEigenpair("eigenvector is identically zero".into()));
        }
        Ok(Self {
            value,
            vector,
            sup_norm,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn vector(&self) -> &[f64] {
        &self.vector
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    /// Discrete (unweighted) Euclidean norm of the samples.
    pub fn l2_norm(&self) -> f64 {
        self.vector.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn len(&self) -> usize {
        self.vector.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vector.is_empty()
    }
}

pub(crate) fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// What point set the eigenvectors are sampled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainTag {
    IntervalGrid,
    SquareGrid { width: usize, height: usize },
    GraphVertices,
    CircleGrid,
}

/// Eigenpairs sorted by ascending eigenvalue, trivial modes removed.
#[derive(Debug, Clone)]
pub struct SpectralBasis {
    pairs: Vec<EigenPair>,
    domain: DomainTag,
    drop_tolerance: f64,
}

impl SpectralBasis {
    /// Sorts `pairs` (stably) and drops every pair with value below the drop
    /// tolerance. With `drop_tolerance = None` the tolerance is
    /// [`DEFAULT_DROP_FACTOR`] times the largest eigenvalue.
    pub fn new(
        mut pairs: Vec<EigenPair>,
        domain: DomainTag,
        drop_tolerance: Option<f64>,
    ) -> Result<Self> {
        if let Some(first) = pairs.first() {
            let n = first.len();
            if let Some(bad) = pairs.iter().position(|p| p.len() != n) {
                return Err(Error::InvalidBasis(format!(
                    "eigenvector {bad} has {} samples, expected {n}",
                    pairs[bad].len()
                )));
            }
        }
        let drop_tolerance = match drop_tolerance {
            Some(t) if t.is_finite() && t >= 0.0 => t,
            Some(t) => {
                return Err(Error::InvalidBasis(format!("bad drop tolerance {t}")));
            }
            None => {
                let max = pairs.iter().fold(0.0_f64, |m, p| m.max(p.value));
                DEFAULT_DROP_FACTOR * max
            }
        };
        pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
        pairs.retain(|p| p.value >= drop_tolerance);
        Ok(Self {
            pairs,
            domain,
            drop_tolerance,
        })
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn values(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    pub fn domain(&self) -> DomainTag {
        self.domain
    }

    pub fn drop_tolerance(&self) -> f64 {
        self.drop_tolerance
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Number of sample points (0 for an empty basis).
    pub fn n_points(&self) -> usize {
        self.pairs.first().map_or(0, EigenPair::len)
    }

    /// Hex SHA-256 over the bit patterns of all eigenvalues and samples.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        for p in &self.pairs {
            hasher.update(p.value.to_bits().to_le_bytes());
            for v in &p.vector {
                hasher.update(v.to_bits().to_le_bytes());
            }
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Which eigenpairs enter the sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    /// The first `n` pairs.
    Terms(usize),
    /// Every pair with eigenvalue at most the cutoff.
    LambdaCutoff(f64),
}

/// Normalization applied to each eigenvector before summing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Sup,
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DegeneratePolicy {
    AsGiven,
    RotationAverage { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreConfig {
    pub selection: Selection,
    pub normalization: Normalization,
    pub degenerate_policy: DegeneratePolicy,
}

impl ScoreConfig {
    pub fn terms(n: usize) -> Self {
        Self {
            selection: Selection::Terms(n),
            normalization: Normalization::Sup,
            degenerate_policy: DegeneratePolicy::AsGiven,
        }
    }

    pub fn lambda_cutoff(cutoff: f64) -> Self {
        Self {
            selection: Selection::LambdaCutoff(cutoff),
            ..Self::terms(1)
        }
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_policy(mut self, policy: DegeneratePolicy) -> Self {
        self.degenerate_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        match self.selection {
            Selection::Terms(0) => {
                return Err(Error::InvalidConfig("n_terms must be positive".into()));
            }
            Selection::LambdaCutoff(c) if !(c.is_finite() && c > 0.0) => {
                return Err(Error::InvalidConfig(format!(
                    "lambda cutoff must be positive, got {c}"
                )));
            }
            _ => {}
        }
        if let DegeneratePolicy::RotationAverage { trials: 0, .. } = self.degenerate_policy {
            return Err(Error::InvalidConfig("rotation averaging needs trials >= 1".into()));
        }
        Ok(())
    }
}

/// Per-point score values with the configuration that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreField {
    values: Vec<f64>,
    config: ScoreConfig,
    basis_hash: String,
}

impl ScoreField {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn config(&self) -> &ScoreConfig {
        &self.config
    }

    pub fn basis_hash(&self) -> &str {
        &self.basis_hash
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Index of the smallest value (first one on ties).
    pub fn argmin(&self) -> Option<usize> {
        argmin(&self.values)
    }

    /// Index of the largest value (first one on ties).
    pub fn argmax(&self) -> Option<usize> {
        argmax(&self.values)
    }

    /// Assembles a field from values computed elsewhere (e.g. per graph
    /// component).
    pub fn from_parts(values: Vec<f64>, config: ScoreConfig, basis_hash: String) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidArgument(format!("score value {v} is not a finite nonnegative number")));
        }
        Ok(Self {
            values,
            config,
            basis_hash,
        })
    }
}

pub fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| *v < values[b]) {
            best = Some(i);
        }
    }
    best
}

pub fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| *v > values[b]) {
            best = Some(i);
        }
    }
    best
}

fn selected_len(basis: &SpectralBasis, selection: Selection) -> Result<usize> {
    let len = match selection {
        Selection::Terms(n) => {
            if basis.len() < n {
                return Err(Error::InvalidConfig(format!(
                    "{n} terms requested but the basis holds {} pairs",
                    basis.len()
                )));
            }
            n
        }
        Selection::LambdaCutoff(c) => basis.pairs.partition_point(|p| p.value <= c),
    };
    if len == 0 {
        return Err(Error::NoEigenpairsSelected);
    }
    Ok(len)
}

fn normalizer(pair: &EigenPair, normalization: Normalization) -> f64 {
    match normalization {
        Normalization::Sup => pair.sup_norm,
        Normalization::L2 => pair.l2_norm(),
    }
}

fn accumulate(values: &mut [f64], pairs: &[EigenPair], normalization: Normalization) -> Result<()> {
    for pair in pairs {
        if pair.value == 0.0 {
            return Err(Error::ZeroEigenvalue);
        }
        let scale = 1.0 / (pair.value.sqrt() * normalizer(pair, normalization));
        for (acc, v) in values.iter_mut().zip(&pair.vector) {
            *acc += v.abs() * scale;
        }
    }
    Ok(())
}

/// Evaluates the score for the selected pairs of `basis`, taking the basis
/// as given (no treatment of degenerate eigenspaces).
pub fn compute_score_field(basis: &SpectralBasis, config: &ScoreConfig) -> Result<ScoreField> {
    config.validate()?;
    if basis.is_empty() {
        return Err(Error::NoEigenpairsSelected);
    }
    let len = selected_len(basis, config.selection)?;
    let mut values = vec![0.0; basis.n_points()];
    accumulate(&mut values, &basis.pairs[..len], config.normalization)?;
    Ok(ScoreField {
        values,
        config: *config,
        basis_hash: basis.digest(),
    })
}

/// Contiguous runs of (numerically) equal eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DegeneracyGroups {
    groups: Vec<Range<usize>>,
    rel_tol: f64,
}

impl DegeneracyGroups {
    pub fn groups(&self) -> &[Range<usize>] {
        &self.groups
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn all_singletons(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    pub fn largest(&self) -> usize {
        self.groups.iter().map(|g| g.len()).max().unwrap_or(0)
    }
}

/// Groups sorted `values` into maximal runs where consecutive entries satisfy
/// `|a - b| <= rel_tol * max(a, b, 1)`.
pub fn group_values(values: &[f64], rel_tol: f64) -> DegeneracyGroups {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        let split = i == values.len() || {
            let (a, b) = (values[i - 1], values[i]);
            (a - b).abs() > rel_tol * a.abs().max(b.abs()).max(1.0)
        };
        if split {
            groups.push(start..i);
            start = i;
        }
    }
    DegeneracyGroups { groups, rel_tol }
}

pub fn group_degenerate(basis: &SpectralBasis, rel_tol: f64) -> DegeneracyGroups {
    group_values(&basis.values(), rel_tol.max(0.0))
}

/// Orthonormalizes the vectors of one group (modified Gram-Schmidt).
fn orthonormal_frame(pairs: &[EigenPair]) -> Result<Vec<Vec<f64>>> {
    let mut frame: Vec<Vec<f64>> = Vec::with_capacity(pairs.len());
    for p in pairs {
        let mut v = p.vector.clone();
        let original = p.l2_norm();
        for _ in 0..2 {
            for q in &frame {
                let c = dot(&v, q);
                axpy(-c, q, &mut v);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm <= 1e-12 * original {
            return Err(Error::InvalidBasis(
                "degenerate group contains linearly dependent vectors".into(),
            ));
        }
        v.iter_mut().for_each(|x| *x /= norm);
        frame.push(v);
    }
    Ok(frame)
}

/// Haar-distributed orthogonal matrix (column-major columns) from Gaussian
/// draws orthonormalized by modified Gram-Schmidt.
fn haar_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Vec<f64>>> {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut c: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for q in &cols {
            let d = dot(&c, q);
            axpy(-d, q, &mut c);
        }
        let norm = dot(&c, &c).sqrt();
        if norm < 1e-10 {
            return None;
        }
        c.iter_mut().for_each(|x| *x /= norm);
        cols.push(c);
    }
    Some(cols)
}

fn rotate(frame: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; frame[0].len()];
    for (c, v) in coeffs.iter().zip(frame) {
        axpy(*c, v, &mut out);
    }
    out
}

/// Averages the score over random rotations of each degenerate eigenspace.
///
/// Groups of dimension two are rotated by the angles `2π(t + u)/trials`,
/// `t = 0..trials`, with a single uniform offset `u` per group (a randomly
/// shifted lattice on the rotation circle). Larger groups draw an independent
/// Haar rotation per trial. Each group is orthonormalized before rotating, and
/// each rotated vector keeps the eigenvalue of the slot it replaces.
pub fn rotation_averaged_score(
    basis: &SpectralBasis,
    groups: &DegeneracyGroups,
    config: &ScoreConfig,
) -> Result<ScoreField> {
    config.validate()?;
    let (trials, seed) = match config.degenerate_policy {
        DegeneratePolicy::RotationAverage { trials, seed } => (trials, seed),
        DegeneratePolicy::AsGiven => {
            return Err(Error::InvalidConfig(
                "rotation averaging requires the rotation-average policy".into(),
            ));
        }
    };
    if basis.is_empty() {
        return Err(Error::NoEigenpairsSelected);
    }
    let covered: usize = groups.groups.iter().map(|g| g.len()).sum();
    if covered != basis.len() || groups.groups.iter().any(|g| g.end > basis.len()) {
        return Err(Error::InvalidArgument(
            "degeneracy groups do not partition the basis".into(),
        ));
    }
    let len = selected_len(basis, config.selection)?;
    let rotated: Vec<&Range<usize>> = groups
        .groups
        .iter()
        .filter(|g| g.len() > 1 && g.start < len)
        .collect();
    if rotated.is_empty() {
        return compute_score_field(basis, config);
    }

    let n = basis.n_points();
    let mut fixed = vec![0.0; n];
    let mut in_group = vec![false; len];
    for g in &rotated {
        let end = g.end.min(len);
        if g.start < end {
            in_group[g.start..end].fill(true);
        }
    }
    let fixed_pairs: Vec<EigenPair> = basis.pairs[..len]
        .iter()
        .zip(&in_group)
        .filter(|(_, g)| !**g)
        .map(|(p, _)| p.clone())
        .collect();
    accumulate(&mut fixed, &fixed_pairs, config.normalization)?;

    let frames: Vec<Vec<Vec<f64>>> = rotated
        .iter()
        .map(|g| orthonormal_frame(&basis.pairs[(*g).clone()]))
        .collect::<Result<_>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offsets: Vec<f64> = rotated.iter().map(|_| rng.gen::<f64>()).collect();

    let mut total = vec![0.0; n];
    let mut trial_values = vec![0.0; n];
    for t in 0..trials {
        trial_values.copy_from_slice(&fixed);
        for ((g, frame), offset) in rotated.iter().zip(&frames).zip(&offsets) {
            let dim = g.len();
            let mut rejections = 0;
            let vectors = loop {
                let matrix = if dim == 2 && rejections == 0 {
                    let angle = 2.0 * PI * (t as f64 + offset) / trials as f64;
                    let (s, c) = angle.sin_cos();
                    Some(vec![vec![c, s], vec![-s, c]])
                } else if dim == 2 {
                    let angle = 2.0 * PI * rng.gen::<f64>();
                    let (s, c) = angle.sin_cos();
                    Some(vec![vec![c, s], vec![-s, c]])
                } else {
                    haar_orthogonal(dim, &mut rng)
                };
                let candidate: Option<Vec<Vec<f64>>> = matrix.map(|m| {
                    m.iter()
                        .map(|coeffs| rotate(frame, coeffs))
                        .collect()
                });
                match candidate {
                    Some(vs) if vs.iter().all(|v| sup_norm(v) > 0.0) => break vs,
                    _ => {
                        rejections += 1;
                        if rejections >= MAX_ROTATION_REJECTIONS {
                            return Err(Error::RotationRejected(rejections));
                        }
                    }
                }
            };
            let rotated_pairs: Vec<EigenPair> = (g.start..g.end)
                .zip(vectors)
                .filter(|(i, _)| *i < len)
                .map(|(i, v)| EigenPair::new(basis.pairs[i].value, v))
                .collect::<Result<_>>()?;
            accumulate(&mut trial_values, &rotated_pairs, config.normalization)?;
        }
        for (acc, v) in total.iter_mut().zip(&trial_values) {
            *acc += v;
        }
    }
    let scale = 1.0 / trials as f64;
    total.iter_mut().for_each(|v| *v *= scale);
    Ok(ScoreField {
        values: total,
        config: *config,
        basis_hash: basis.digest(),
    })
}

/// Scores `basis` according to `config.degenerate_policy`.
///
/// Under [`DegeneratePolicy::AsGiven`] a warning is logged when a selected
/// eigenvalue is degenerate, since the score then depends on the basis chosen
/// inside the eigenspace.
pub fn score_with_policy(
    basis: &SpectralBasis,
    config: &ScoreConfig,
    rel_tol: f64,
) -> Result<ScoreField> {
    let groups = group_degenerate(basis, rel_tol);
    match config.degenerate_policy {
        DegeneratePolicy::AsGiven => {
            if !groups.all_singletons() {
                log::warn!(
                    "basis has a degenerate eigenspace of dimension {}; the score depends on the basis chosen inside it",
                    groups.largest()
                );
            }
            compute_score_field(basis, config)
        }
        DegeneratePolicy::RotationAverage { .. } => rotation_averaged_score(basis, &groups, config),
    }
}

/// `λ^{-1/2} |φ(x)| / ‖φ‖_∞`, the per-eigenfunction proxy for the distance
/// from `x` to the nodal set of `φ`.
pub fn nodal_proxy(pair: &EigenPair, point: usize) -> Result<f64> {
    if pair.value <= 0.0 {
        return Err(Error::NonPositiveEigenvalue(pair.value));
    }
    let sample = pair.vector.get(point).ok_or_else(|| {
        Error::InvalidArgument(format!("point {point} out of range for {} samples", pair.len()))
    })?;
    Ok(sample.abs() / (pair.value.sqrt() * pair.sup_norm))
}

/// Neighborhood structure for local-minimum detection.
#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    Grid1d,
    /// Row-major grid, 4-neighborhood.
    Grid2d { width: usize, height: usize },
    Adjacency(Vec<Vec<usize>>),
}

impl Topology {
    fn check_len(&self, len: usize) -> Result<()> {
        let expected = match self {
            Topology::Grid1d => len,
            Topology::Grid2d { width, height } => width * height,
            Topology::Adjacency(adj) => adj.len(),
        };
        if expected != len {
            return Err(Error::InvalidArgument(format!(
                "topology describes {expected} points but the field has {len}"
            )));
        }
        if let Topology::Adjacency(adj) = self {
            if adj.iter().flatten().any(|&j| j >= len) {
                return Err(Error::InvalidArgument("adjacency index out of range".into()));
            }
        }
        Ok(())
    }
}

/// Indices whose value is strictly below every neighbor's value.
pub fn find_strict_local_minima(values: &[f64], topology: &Topology) -> Result<Vec<usize>> {
    topology.check_len(values.len())?;
    let below = |i: usize, j: usize| values[i] < values[j];
    let minima = match topology {
        Topology::Grid1d => (0..values.len())
            .filter(|&i| {
                let left = i == 0 || below(i, i - 1);
                let right = i + 1 == values.len() || below(i, i + 1);
                left && right && values.len() > 1
            })
            .collect(),
        Topology::Grid2d { width, height } => {
            let (w, h) = (*width, *height);
            (0..values.len())
                .filter(|&i| {
                    let (r, c) = (i / w, i % w);
                    let mut has_neighbor = false;
                    let mut ok = true;
                    let mut visit = |j: usize| {
                        has_neighbor = true;
                        ok &= below(i, j);
                    };
                    if r > 0 {
                        visit(i - w);
                    }
                    if r + 1 < h {
                        visit(i + w);
                    }
                    if c > 0 {
                        visit(i - 1);
                    }
                    if c + 1 < w {
                        visit(i + 1);
                    }
                    ok && has_neighbor
                })
                .collect()
        }
        Topology::Adjacency(adj) => (0..values.len())
            .filter(|&i| !adj[i].is_empty() && adj[i].iter().all(|&j| j == i || below(i, j)))
            .collect(),
    };
    Ok(minima)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
