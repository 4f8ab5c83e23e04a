use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no eigenpairs selected")]
    NoEigenpairsSelected,

    #[error("zero eigenvalue in score")]
    ZeroEigenvalue,

    #[error("eigenvalue must be positive, got {0}")]
    NonPositiveEigenvalue(f64),

    #[error("invalid eigenpair: {0}")]
    InvalidEigenpair(String),

    #[error("invalid spectral basis: {0}")]
    InvalidBasis(String),

    #[error("invalid score configuration: {0}")]
    InvalidConfig(String),

    #[error("random rotation produced a zero vector {0} times in a row")]
    RotationRejected(usize),

    #[error("operator is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e}")]
    NotSymmetric { row: usize, col: usize, gap: f64 },

    #[error("Lanczos breakdown persisted after {0} restarts")]
    LanczosBreakdown(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {0} lies outside the unit interval")]
    OutOfDomain(f64),

    #[error("periodic sequence has nonzero mean {0:e}")]
    NonZeroMean(f64),

    #[error("weight sequence is not positive and nondecreasing at index {0}")]
    NonMonotoneWeights(usize),

    #[error("unresolved perturbation: window of width {eps} spans fewer than 4 cells of size {h}")]
    UnresolvedPerturbation { eps: f64, h: f64 },

    #[error("relation not symmetric: {0} is not congruent to 1 mod 4")]
    RelationNotSymmetric(u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("zero has no quadratic character")]
    ZeroResidueClass,

    #[error("eigenspace mismatch: projection residual {0:e} exceeds tolerance")]
    EigenspaceMismatch(f64),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bad PGM magic {0:?}")]
    BadMagic(String),

    #[error("truncated PGM payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("PGM maxval must be in 1..=65535, got {0}")]
    BadMaxval(u64),

    #[error("malformed PGM header: {0}")]
    BadHeader(String),

    #[error("k_neighbors = {k} must be smaller than the pixel count {n}")]
    TooManyNeighbors { k: usize, n: usize },

    #[error("zero bandwidth: all k-th neighbor distances vanish; pass an explicit bandwidth")]
    ZeroBandwidth,

    #[error("vertex {0} is isolated; normalized Laplacians need positive degrees")]
    IsolatedVertex(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
