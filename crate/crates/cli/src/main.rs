mod commands;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bstar", version, about = "B*[g] sets, symmetric subsets and autoconvolution bounds")]
pub struct Cli {
    /// Seed for every randomized step; echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that a set is B*[g] (from --set or a JSON artifact).
    Verify(VerifyArgs),
    /// Run one of the explicit constructions.
    Construct(ConstructArgs),
    /// Exhaustive search for the smallest n admitting a large B*[g] set.
    Search(SearchArgs),
    /// Largest symmetric subset of a finite union of intervals.
    Dee(DeeArgs),
    /// Optimize unions of k intervals for a small largest symmetric subset.
    DeltaK(DeltaKArgs),
    /// Fourier data of piecewise-linear kernels and the derived bounds.
    Kernel(KernelArgs),
    /// Closed-form bound calculators.
    Bounds(BoundsArgs),
    /// Seeded probabilistic constructions.
    Random(RandomArgs),
    /// Stream rows of the minimal-n tables.
    Table(TableArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Comma-separated elements.
    #[arg(long, value_delimiter = ',', conflicts_with = "file")]
    pub set: Option<Vec<u64>>,
    /// Reduce sums mod this number.
    #[arg(long)]
    pub modulus: Option<u64>,
    /// Representation bound; read from the artifact when omitted.
    #[arg(long)]
    pub g: Option<u64>,
    /// JSON artifact produced by any subcommand.
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Ruzsa,
    Bose,
    Singer,
    SmallGn,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Prime for the field constructions.
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Target g for small-gn.
    #[arg(long)]
    pub g: Option<u64>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long, default_value = "integer")]
    pub kind: String,
    #[arg(long)]
    pub g: u64,
    #[arg(long)]
    pub k: u64,
    /// Decide a single n instead of minimizing.
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub n_limit: Option<u64>,
    /// Node budget per decision.
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Wall-clock budget per decision.
    #[arg(long)]
    pub max_seconds: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Line,
    Circle,
}

#[derive(Args, Debug)]
pub struct DeeArgs {
    /// JSON array of [a, b] pairs.
    #[arg(long)]
    pub intervals: Option<String>,
    #[arg(long, value_enum, default_value_t = GeometryArg::Line)]
    pub geometry: GeometryArg,
    /// JSON interval set artifact.
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,
    /// Integer set S, mapped to the union of [(s-1)/n, s/n).
    #[arg(long, value_delimiter = ',', requires = "n")]
    pub set: Option<Vec<u64>>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Include the symmetric-measure profile.
    #[arg(long)]
    pub profile: bool,
}

#[derive(Args, Debug)]
pub struct DeltaKArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum KernelFamily {
    /// 0.6644 + 0.3356 ((2/π) arctan((1-2x)/√(4x-1)))^1.2015
    Arctan,
    /// 1 - (1 - (4(1/2 - x))^1.61707)^0.546335
    Power,
    /// Optimal two-level step
    Step,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[arg(long, value_enum, conflicts_with = "file")]
    pub family: Option<KernelFamily>,
    /// CSV of `t,y_t` rows.
    #[arg(long)]
    pub file: Option<std::path::PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub t: usize,
    /// First index of the tail.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 4.0 / 3.0)]
    pub p: f64,
    /// Also report the optimal mix with the constant kernel.
    #[arg(long)]
    pub alpha_mix: bool,
    /// Run the ‖f*f‖∞ certificate with this kernel's two-coefficient data.
    #[arg(long)]
    pub certificate: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub grid: f64,
    #[arg(long, default_value_t = 1.182778)]
    pub target: f64,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[arg(long, requires = "g")]
    pub rho_upper: bool,
    #[arg(long, requires = "g")]
    pub rho_lower: bool,
    #[arg(long)]
    pub g: Option<u64>,
    /// ‖f*f‖∞ and Δ lower bounds at this ε in (3/8, 5/8).
    #[arg(long)]
    pub delta_half: Option<f64>,
    /// γ and α, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub ubiquity: Option<Vec<f64>>,
    #[arg(long)]
    pub zeta_integral: bool,
    #[arg(long)]
    pub step_kernel: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum RandomKind {
    Circle,
    Integer,
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    #[arg(long, value_enum)]
    pub construction: RandomKind,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Modular sets
    #[value(name = "C")]
    C,
    /// Integer sets
    #[value(name = "R")]
    R,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, default_value_t = 8)]
    pub max_k: u64,
    #[arg(long, default_value_t = 2)]
    pub g_min: u64,
    #[arg(long, default_value_t = 6)]
    pub g_max: u64,
    #[arg(long)]
    pub max_nodes: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
