use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "nodal", version, about = "Spectral scores from sup-normalized Laplacian eigenfunctions")]
pub struct Cli {
    /// JSON object of flag values (keys as flag names); command-line flags win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score on [0, 1] with the Dirichlet sine basis
    Interval(IntervalArgs),
    /// Score on the unit square with a lattice eigenvalue cutoff
    Square(SquareArgs),
    /// Test whether p/q (or (p/q, r/s)) is a strict local minimum
    RationalCheck(RationalArgs),
    /// Closed-form (and optionally numeric) score on a Paley graph
    Paley(PaleyArgs),
    /// Score on the circle with a localized potential well
    Torus(TorusArgs),
    /// Score on a graph read from an edge list, PGM image or OBJ mesh
    Graph(GraphArgs),
    /// Write a synthetic clutter image with one anomalous block
    Synth(SynthArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Interval(_) => "interval",
            Command::Square(_) => "square",
            Command::RationalCheck(_) => "rational-check",
            Command::Paley(_) => "paley",
            Command::Torus(_) => "torus",
            Command::Graph(_) => "graph",
            Command::Synth(_) => "synth",
        }
    }
}

pub const SUBCOMMANDS: [&str; 7] = ["interval", "square", "rational-check", "paley", "torus", "graph", "synth"];

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct IntervalArgs {
    /// Number of terms N
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_terms: u64,
    /// Grid intervals M; the points are i/M for i = 0..=M
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub grid: u64,
    /// Also write strict local minima to <out>.minima.csv
    #[arg(long)]
    pub find_minima: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct SquareArgs {
    /// Keep modes with m² + n² ≤ L
    #[arg(long)]
    pub lambda_cut: f64,
    /// Grid intervals as MxK (or M); points are (i/M, j/K)
    #[arg(long, value_parser = parse_grid)]
    pub grid: String,
    #[arg(long)]
    pub out: PathBuf,
    /// Heatmap output
    #[arg(long)]
    pub pgm: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[command(group(ArgGroup::new("second").args(["r", "s"]).multiple(true).requires_all(["r", "s"])))]
#[serde(rename_all = "kebab-case")]
pub struct RationalArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    /// Terms for the 1-D check (default q²)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_terms: Option<u64>,
    /// Neighbor offset (default 1/(8q²), with q the largest denominator)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// Numerator of the second coordinate (switches to the square)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    /// Denominator of the second coordinate
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    /// Eigenvalue cutoff for the 2-D check
    #[arg(long, default_value_t = 4000.0)]
    pub lambda_cut: f64,
    /// Also write the summary line here
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct PaleyArgs {
    /// Prime with p ≡ 1 (mod 4)
    #[arg(long, value_parser = parse_paley_prime)]
    pub p: u64,
    /// Cross-check against a dense numerical eigendecomposition
    #[arg(long)]
    pub verify: bool,
    /// Per-vertex values as index,re,im
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpArg {
    Constant,
    Cosine,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[command(group(ArgGroup::new("mode").args(["n_terms", "find_n_eps"]).required(true)))]
#[serde(rename_all = "kebab-case")]
pub struct TorusArgs {
    /// Window start in [0, 2π)
    #[arg(long, allow_negative_numbers = true)]
    pub y: f64,
    /// Window width
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = BumpArg::Constant)]
    pub bump: BumpArg,
    #[arg(long, default_value_t = 512)]
    pub n_grid: usize,
    /// Number of eigenvalue pairs N
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_terms: Option<usize>,
    /// Largest N to test; reports N_ε
    #[arg(long, value_name = "N_MAX")]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub find_n_eps: Option<usize>,
    /// Add the ground mode to the sum
    #[arg(long)]
    pub include_ground: bool,
    /// Average over this many rotations of degenerate eigenspaces
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Score CSV (with --n-terms)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    Edges,
    Pgm,
    Obj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LaplacianArg {
    Sym,
    Comb,
    Rw,
}

impl LaplacianArg {
    pub fn name(self) -> &'static str {
        match self {
            LaplacianArg::Sym => "sym",
            LaplacianArg::Comb => "comb",
            LaplacianArg::Rw => "rw",
        }
    }
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct GraphArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub format: FormatArg,
    /// Default: comb for edge lists, sym for images and meshes
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laplacian: Option<LaplacianArg>,
    /// Nearest neighbors per patch (images)
    #[arg(long, default_value_t = 16)]
    pub knn: usize,
    /// Patch side length (images)
    #[arg(long, default_value_t = 8)]
    pub patch: usize,
    /// Gaussian bandwidth σ or "auto" (images)
    #[arg(long, default_value = "auto", value_parser = parse_bandwidth)]
    pub bandwidth: String,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_terms: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Heatmap output (images only)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pgm: Option<PathBuf>,
    /// Seed of the eigensolver start vector and rotation sampling
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Average over this many rotations of degenerate eigenspaces
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotation_trials: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "kebab-case")]
pub struct SynthArgs {
    #[arg(long, default_value_t = 64)]
    pub size: usize,
    #[arg(long, default_value_t = 8)]
    pub block: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_grid(s: &str) -> Result<String, String> {
    grid_dims(s).map(|_| s.to_string())
}

/// `"MxK"` or `"M"` into interval counts.
pub fn grid_dims(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| match t.trim().parse::<usize>() {
        Ok(v) if v >= 1 => Ok(v),
        _ => Err(format!("invalid grid size {t:?}")),
    };
    match s.split_once(['x', 'X']) {
        Some((a, b)) => Ok((parse(a)?, parse(b)?)),
        None => parse(s).map(|m| (m, m)),
    }
}

fn parse_paley_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("invalid integer {s:?}"))?;
    if !nodal_core::paley::is_prime(p) {
        return Err(format!("{p} is not prime"));
    }
    if p % 4 != 1 {
        return Err(format!("{p} is not congruent to 1 mod 4"));
    }
    Ok(p)
}

fn parse_bandwidth(s: &str) -> Result<String, String> {
    if s == "auto" {
        return Ok(s.to_string());
    }
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(s.to_string()),
        _ => Err(format!("bandwidth must be \"auto\" or a positive number, got {s:?}")),
    }
}
