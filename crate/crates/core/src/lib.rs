//! Spectral scores built from sup-normalized Laplacian eigenfunctions.
//!
//! The score of a point `x` is
//!
//! ```text
//! f_N(x) = Σ_{k ≤ N} λ_k^{-1/2} |φ_k(x)| / ‖φ_k‖_∞
//! ```
//!
//! which is small near the nodal sets of the low eigenfunctions and large
//! away from them. The crate evaluates it in closed form on the interval,
//! the square and Paley graphs, numerically on a perturbed circle, and on
//! arbitrary weighted graphs (edge lists, meshes, image patch graphs).

pub mod analytic;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod paley;
pub mod spectral;
pub mod torus;

pub use eigen::{dense_sym_eig, lanczos_smallest, EigenSolveReport, SymOperator};
pub use error::{Error, Result};
pub use graph::{Graph, Image, LaplacianKind};
pub use spectral::{
    compute_score_field, DegeneratePolicy, DomainTag, EigenPair, Normalization, ScoreConfig, ScoreField,
    Selection, SpectralBasis,
};
