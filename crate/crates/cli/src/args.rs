use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "abp",
    version,
    about = "α-Bernstein-Pălțănea operators: evaluation, error tables, convergence orders and formula checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Operator values on a grid: x, f, Q, M1, M2, M3.
    Eval(EvalArgs),
    /// Errors |f - L f| at x = 0.1, ..., 0.9 (or --points).
    Table(TableArgs),
    /// Errors along an n ladder and fitted log-log slopes.
    Convergence(ConvergenceArgs),
    /// Exact checks of the closed-form moments and the reduction identities.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Q,
    M1,
    M2,
    M3,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    PaperExample,
    ExactE1,
    Custom,
}

#[derive(Debug, Args)]
pub struct OperatorArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub op: Op,
    /// Degree (default 10).
    #[arg(long)]
    pub n: Option<usize>,
    /// Kernel exponent ρ (default 5, or 4 for `convergence`).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Shape parameter α (default 0.2, or 0.3 for `convergence`).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// First-order coefficients: ((n-1)/(2n), 1/n), ((ρ+1)/ρ, -(ρ+2)/ρ), or --a0/--a1.
    #[arg(long, value_enum, default_value = "paper-example")]
    pub scheme: Scheme,
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a1: Option<f64>,
    /// Relative quadrature tolerance (default 1e-10).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Registry function name.
    #[arg(long, conflicts_with = "poly")]
    pub function: Option<String>,
    /// Polynomial coefficients c0,c1,... in ascending degree.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// start:stop:step
    #[arg(long, conflicts_with = "points")]
    pub grid: Option<String>,
    /// x1,x2,...
    #[arg(long, value_delimiter = ',')]
    pub points: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Evaluation point.
    #[arg(long, default_value_t = 0.3)]
    pub x: f64,
    /// Degrees n1,n2,... (strictly increasing).
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256")]
    pub ns: Vec<String>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub op: OperatorArgs,
    /// Seed for the random rational parameter tuples.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Number of random tuples.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Largest degree used by the exact checks.
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    #[command(flatten)]
    pub output: Output,
}
