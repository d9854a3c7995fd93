use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "aacc",
    version,
    about = "Anti-averaging-collusion fingerprinting codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write the report here (atomically) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check code-class properties and report the code rate.
    Verify(VerifyArgs),
    /// Average the colluders' codewords into a generated word.
    Attack(AttackArgs),
    /// Recover colluders from a generated word.
    Trace(TraceArgs),
    /// Concatenate a q-ary outer code with a binary inner code.
    Concat(ConcatArgs),
    /// Search for a large code with a given property.
    Search(SearchArgs),
    /// Run the spread-spectrum embed/average/extract pipeline.
    Simulate(SimulateArgs),
    /// Time soft tracing for growing code sizes.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub t: usize,
    /// Suspect-list bound for scld; defaults to M.
    #[arg(long)]
    pub list_cap: Option<usize>,
    /// Properties that must hold for exit status 0 (default: all six).
    #[arg(long, value_delimiter = ',')]
    pub properties: Vec<String>,
    /// Subset evaluations allowed per property.
    #[arg(long, default_value_t = aacc::props::DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Comma-separated 1-based codeword indices.
    #[arg(long, value_delimiter = ',', required = true)]
    pub colluders: Vec<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub code: PathBuf,
    /// Generated word: JSON as written by `attack`, or fractions like `0 2/3 2/3 1/3`.
    #[arg(long)]
    pub word: PathBuf,
    #[arg(long)]
    pub t_cap: usize,
    /// Treat the code as outer ∘ inner and use two-stage tracing.
    #[arg(long)]
    pub two_stage: bool,
    /// Outer length; the code is split into n1 blocks to recover outer and inner codes.
    #[arg(long, requires = "two_stage", conflicts_with_all = ["outer", "inner"])]
    pub n1: Option<usize>,
    #[arg(long, requires_all = ["two_stage", "inner"])]
    pub outer: Option<PathBuf>,
    #[arg(long, requires_all = ["two_stage", "outer"])]
    pub inner: Option<PathBuf>,
    /// Include per-iteration diagnostics.
    #[arg(long)]
    pub steps: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ConcatArgs {
    #[arg(long)]
    pub outer: PathBuf,
    #[arg(long)]
    pub inner: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: usize,
    #[arg(long)]
    pub t: usize,
    /// One of fpc, sc, ssc, smippc, udc.
    #[arg(long)]
    pub property: String,
    /// Backtrack over all codes (requires n*q <= 12).
    #[arg(long)]
    pub exhaustive: bool,
    /// Required for greedy search.
    #[arg(long, required_unless_present = "exhaustive")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 16)]
    pub trials: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub node_budget: u64,
    #[arg(long, default_value_t = aacc::props::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Also write the best code found, in code-file format.
    #[arg(long)]
    pub code_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long, value_delimiter = ',', required = true)]
    pub colluders: Vec<usize>,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub seed: u64,
    /// Standard deviation of Gaussian noise added to the colluded signal.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Largest denominator considered when snapping; defaults to the coalition size.
    #[arg(long)]
    pub t_max: Option<u64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Write the colluded signal (u64 LE length, then f64 LE samples).
    #[arg(long)]
    pub signal_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256, 512])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 64)]
    pub attacks: usize,
    #[arg(long, default_value_t = 15)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}
