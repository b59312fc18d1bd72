use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "morsekit", version, about = "Morse theory of distance-squared functions on matrix manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the critical points of f_a with their closed-form indices.
    CriticalPoints(SpaceOpts),
    /// Compare closed-form and Hessian-spectrum indices at every critical point.
    IndexCheck(IndexCheckOpts),
    /// Poincaré polynomial and Euler characteristic from the index census.
    Betti(BettiOpts),
    /// Integrate the gradient flow from a seeded start point.
    Flow(FlowOpts),
    /// Tally the limits of ascending flows from seeded start points.
    Census(CensusOpts),
    /// Build a point from lines (SO, Grassmannian) or oriented planes (CS).
    Resolve(ResolveOpts),
    /// Sample Bott-Samelson cycles and test that f_a peaks at the critical point.
    BsCheck(BsCheckOpts),
    /// Structure constants of a product of two Schubert classes.
    Product(ProductOpts),
    /// Compare partition counts in the k x (n-k) box with Grassmannian Betti numbers.
    PoincareConsistency(ConsistencyOpts),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// O(n), real orthogonal group
    Orth,
    /// U(n)
    Unitary,
    /// Sp(n), quaternionic unitary group
    Symplectic,
    /// SO(n)
    So,
    /// Complex Grassmannian G(n,k)
    Grass,
    /// Lagrangian Grassmannian LG(n)
    Lagrangian,
    /// Complex structures CS(n) on R^2n
    Cs,
    /// Complete flags of C^n
    Flag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    So,
    Grass,
    Cs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RingArg {
    Z,
    Z2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum DirectionArg {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, Args)]
pub struct SpaceOpts {
    #[arg(long, value_enum)]
    pub manifold: Kind,
    #[arg(long)]
    pub n: usize,
    /// Subspace dimension (Grassmannian only).
    #[arg(long)]
    pub k: Option<usize>,
    /// Eigenvalues of the flag manifold, comma separated and increasing.
    #[arg(long)]
    pub spectrum: Option<String>,
    /// Diagonal of the focal point a, comma separated and increasing.
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct IndexCheckOpts {
    #[command(flatten)]
    pub space: SpaceOpts,
    /// Eigenvalues below this multiple of the spectral radius count as degenerate.
    #[arg(long, default_value_t = morsekit::config::DEGENERACY_REL)]
    pub degeneracy_rel: f64,
}

#[derive(Debug, Clone, Args)]
pub struct BettiOpts {
    #[command(flatten)]
    pub space: SpaceOpts,
    /// Coefficient ring; defaults to Z2 where integral Betti numbers are not available.
    #[arg(long, value_enum)]
    pub ring: Option<RingArg>,
}

#[derive(Debug, Clone, Args)]
pub struct FlowOpts {
    #[command(flatten)]
    pub space: SpaceOpts,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 200.0)]
    pub tmax: f64,
    #[arg(long, value_enum, default_value_t)]
    pub direction: DirectionArg,
    #[arg(long, default_value_t = morsekit::config::FLOW_GRAD_STOP)]
    pub grad_stop: f64,
    /// Write the trajectory CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CensusOpts {
    #[command(flatten)]
    pub space: SpaceOpts,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.01)]
    pub dt: f64,
    #[arg(long, default_value_t = 200.0)]
    pub tmax: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ResolveOpts {
    #[arg(long, value_enum)]
    pub space: Space,
    #[arg(long)]
    pub n: usize,
    /// Critical label; resolves the coordinate lines or planes realising it.
    #[arg(long = "I", conflicts_with = "vectors")]
    pub label: Option<String>,
    /// Lines as `v1;v2;...` (each comma separated), or for CS planes as `u1|v1;u2|v2;...`.
    #[arg(long, allow_hyphen_values = true)]
    pub vectors: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BsCheckOpts {
    #[arg(long, value_enum)]
    pub space: Space,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// Critical label; all labels when omitted.
    #[arg(long = "I")]
    pub label: Option<String>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ProductOpts {
    #[arg(long, value_enum)]
    pub space: Space,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    /// First partition, comma separated.
    #[arg(long)]
    pub i: String,
    /// Second partition, comma separated.
    #[arg(long)]
    pub j: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct ConsistencyOpts {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}
