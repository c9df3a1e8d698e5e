use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "foel", version, about = "Energy-level ordering experiments for quantum spin models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full spectrum by S^3 block plus per-sector extremes.
    Spectrum(SpectrumArgs),
    /// Sector minima and the FOEL verdict.
    Foel(FoelArgs),
    /// Temperley-Lieb matrix on the arc-diagram basis.
    TlMatrix(TlArgs),
    /// Highest-weight basis from ordered Ising configurations.
    FkBasis(FkArgs),
    /// Sector minima of the SU_q(2)-invariant XXZ chain.
    Qfoel(QfoelArgs),
    /// Finite-volume droplet energies against the infinite-volume values.
    Droplet(DropletArgs),
    /// SSEP spectral gaps in every particle sector.
    SsepGap(GraphArgs),
    /// Unitary equivalence of the SSEP generator and the Heisenberg model.
    Spinmap(GraphArgs),
    /// Data for the spectrum figure of the spin-1 chain.
    Figure1(Figure1Args),
}

#[derive(Args, Debug, Clone)]
pub struct OutArgs {
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct SystemSource {
    /// Chain of spins given as twice-spin integers, e.g. "1,2,2".
    #[arg(long)]
    pub chain: Option<String>,
    /// Graph-spec file (`site <id> <twice_spin>` / `edge <u> <v> <J>` lines).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Spin-1 chain with bond (1 - S·S) + beta (1 - (S·S)^2).
    #[arg(long = "spin1-beta", allow_hyphen_values = true)]
    pub spin1_beta: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub source: SystemSource,
    /// Chain couplings, comma-separated (default: all 1).
    #[arg(long = "J")]
    pub couplings: Option<String>,
    /// Chain length for --spin1-beta.
    #[arg(long = "L")]
    pub len: Option<usize>,
    /// Subtract the ground energy.
    #[arg(long)]
    pub offset: bool,
    #[arg(long = "foel-tol", default_value_t = foel_core::sector::FOEL_TOL)]
    pub foel_tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct FoelArgs {
    #[command(flatten)]
    pub source: SystemSource,
    /// Chain couplings, comma-separated (default: all 1).
    #[arg(long = "J")]
    pub couplings: Option<String>,
    /// Chain length for --spin1-beta; every length from 2 up to this is checked.
    #[arg(long = "L")]
    pub len: Option<usize>,
    /// Number of random coupling vectors, J uniform in (0, 2] (chains only).
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long = "foel-tol", default_value_t = foel_core::sector::FOEL_TOL)]
    pub foel_tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct TlArgs {
    /// Number of vertices.
    #[arg(long)]
    pub k: usize,
    /// Number of arcs.
    #[arg(long)]
    pub n: usize,
    /// Couplings on the k-1 bonds (default: all 1).
    #[arg(long = "J")]
    pub couplings: Option<String>,
    /// Coupling of the extra bond used for the dominance check against k+1 vertices.
    #[arg(long = "next-J", default_value_t = 1.0)]
    pub next_coupling: f64,
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct FkArgs {
    /// Chain of spins given as twice-spin integers.
    #[arg(long)]
    pub chain: String,
    /// Twice the total spin of the sector.
    #[arg(long = "S2")]
    pub twice_spin: i64,
    #[arg(long = "J")]
    pub couplings: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Deformation {
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct QfoelArgs {
    /// Chain lengths, comma-separated.
    #[arg(long = "L")]
    pub lens: String,
    #[command(flatten)]
    pub deformation: Deformation,
    #[arg(long = "foel-tol", default_value_t = foel_core::sector::FOEL_TOL)]
    pub foel_tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct DropletArgs {
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Chain lengths, comma-separated.
    #[arg(long = "L", default_value = "6,8,10,12")]
    pub lens: String,
    /// Droplet sizes, comma-separated.
    #[arg(long, default_value = "1,2,3")]
    pub n: String,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Graph-spec file; edge couplings are the rates.
    #[arg(long, conflicts_with = "len")]
    pub graph: Option<PathBuf>,
    /// Path with this many vertices.
    #[arg(long = "L")]
    pub len: Option<usize>,
    /// Path couplings, comma-separated (default: all 1).
    #[arg(long = "J")]
    pub couplings: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone)]
pub struct Figure1Args {
    #[arg(long = "L", default_value_t = 5)]
    pub len: usize,
    #[arg(long = "foel-tol", default_value_t = foel_core::sector::FOEL_TOL)]
    pub foel_tol: f64,
    #[command(flatten)]
    pub out: OutArgs,
}
