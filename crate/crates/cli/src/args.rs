use clap::{Args, Parser, Subcommand, ValueEnum};
use maass_core::poincare::{TruncationPolicy, DEFAULT_STEP};

#[derive(Debug, Parser)]
#[command(name = "maass", version, about = "Coefficients of weak Maass-Poincare series and the weight 1/2, 3/2 bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Table of Fourier coefficients c(n) or b(n).
    Coeff(CoeffArgs),
    /// A basis element or mock modular form as a q-series.
    Basis(BasisArgs),
    /// Runs a named verification suite.
    Verify(VerifyArgs),
    /// Kloosterman sums K_k(m, n, c) for a range of moduli.
    Kloosterman(KloostermanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; stdout if absent.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    /// Exit with code 2 instead of writing unconverged values.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Worker threads; MAASS_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Omit the timestamp so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub reproducible: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PolicyArgs {
    #[arg(long, default_value_t = 100_000)]
    pub c_max: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[arg(long, default_value_t = 2)]
    pub stability_factor: u64,
    #[arg(long, default_value_t = 16)]
    pub c_start: u64,
}

impl PolicyArgs {
    pub fn policy(&self) -> TruncationPolicy {
        TruncationPolicy {
            c_max: self.c_max,
            tol: self.tol,
            stability_factor: self.stability_factor,
            c_start: self.c_start,
        }
    }
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// Project to the plus space (level 4, half-integral weight).
    #[arg(long)]
    pub plus: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long = "twice-k", allow_hyphen_values = true)]
    pub twice_k: i32,
    #[arg(long = "N")]
    pub level: u64,
    #[arg(long)]
    pub s: f64,
    /// Inclusive range `a..b`, or a single index.
    #[arg(long, allow_hyphen_values = true)]
    pub n: String,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BasisKind {
    F,
    G,
    Gmock,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[arg(value_enum)]
    pub kind: BasisKind,
    /// Index of `f_d`.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<i64>,
    /// Index of `g_D`.
    #[arg(long = "D", allow_hyphen_values = true)]
    pub big_d: Option<i64>,
    #[arg(long, default_value_t = 12)]
    pub nmax: i64,
    /// Step of the s-derivative stencil (mock forms only).
    #[arg(long, default_value_t = DEFAULT_STEP)]
    pub step: f64,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GridArg {
    Small,
    Full,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    pub suite: String,
    #[arg(long, value_enum, default_value = "full")]
    pub grid: GridArg,
    #[command(flatten)]
    pub policy: PolicyArgs,
}

#[derive(Debug, Args)]
pub struct KloostermanArgs {
    #[arg(long = "twice-k", allow_hyphen_values = true)]
    pub twice_k: i32,
    #[arg(long, allow_hyphen_values = true)]
    pub m: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    /// Inclusive range of moduli `a..b`, or a single modulus.
    #[arg(long)]
    pub c: String,
}

/// Parses `a..b` (inclusive) or `a`.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in {s:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in {s:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}
