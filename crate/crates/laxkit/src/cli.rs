use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "laxkit", version, about = "Painleve analysis, Lax flows and periodic Jacobi spectra")]
pub struct Cli {
    /// Directory for report files; without it the primary report goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report printed to stdout when --out is absent.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Seed for random initial data and random test points.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Bind a symbolic constant, e.g. --bind A=1 (repeatable).
    #[arg(long = "bind", global = true, value_name = "NAME=VALUE")]
    pub bind: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laurent-series analysis: weights, balances, resonances, series, curves.
    Painleve(PainleveArgs),
    /// Integrate a Lax flow or a polynomial system and report conservation drift.
    Flow(FlowArgs),
    /// Spectral data, measure and continued fraction of a periodic Jacobi matrix.
    Jacobi(JacobiArgs),
    /// Run the acceptance suite and print a pass/fail matrix.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Args)]
pub struct PainleveArgs {
    /// System file (.ivf).
    #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
    pub input: Option<PathBuf>,
    /// Shipped system (henon-heiles, henon-heiles-5, rdg, rdg-5, kvm, oscillator).
    #[arg(long)]
    pub builtin: Option<String>,
    /// Truncation order in units of t^(1/ell); defaults to the largest resonance.
    #[arg(long)]
    pub order: Option<u32>,
    /// Also check the shipped restoring morphism of a builtin.
    #[arg(long, conflicts_with = "morphism_file")]
    pub morphism: bool,
    /// Morphism file to check against --target.
    #[arg(long, requires = "target")]
    pub morphism_file: Option<PathBuf>,
    /// Target system of --morphism-file: a file or a builtin name.
    #[arg(long, requires = "morphism_file")]
    pub target: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct FlowArgs {
    /// System file (.ivf) with invariants and optionally a pencil.
    #[arg(conflicts_with = "builtin", required_unless_present = "builtin")]
    pub input: Option<PathBuf>,
    /// toda-periodic, toda-open, euler-arnold, manakov, neumann, jacobi-geodesic,
    /// or a shipped system name such as kvm.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Matrix size (Lax builtins only).
    #[arg(short = 'N', long = "size")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub dt: f64,
    #[arg(long = "t-end", default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Drift tolerance for the pass/fail verdict.
    #[arg(long, default_value_t = 1e-8, allow_negative_numbers = true)]
    pub tol: f64,
    /// Initial point, comma separated (random from --seed otherwise).
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Keep every n-th step in the trajectory file.
    #[arg(long, default_value_t = 10)]
    pub stride: usize,
    /// Also write a gnuplot script for the trajectory file (only with --out).
    #[arg(long)]
    pub gnuplot: bool,
}

#[derive(Debug, Clone, Args)]
pub struct JacobiArgs {
    /// Off-diagonal period a_1..a_N, comma separated.
    #[arg(short = 'a', allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Diagonal period b_1..b_N, comma separated.
    #[arg(short = 'b', allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Period for a random matrix when -a/-b are absent.
    #[arg(short = 'N', long = "size")]
    pub n: Option<usize>,
    /// JSON file {"a": [...], "b": [...], "a0": ...}.
    #[arg(long, conflicts_with_all = ["a", "b", "n"])]
    pub input: Option<PathBuf>,
    /// Leading numerator a_0 of the continued fraction (defaults to a_N).
    #[arg(long, allow_hyphen_values = true)]
    pub a0: Option<String>,
    /// Compare the measure's Cauchy-Stieltjes transform with the continued fraction.
    #[arg(long)]
    pub check_stieltjes: bool,
    /// Check orthogonality of B_0..B_K against the measure.
    #[arg(long, value_name = "K")]
    pub orthogonality: Option<usize>,
    /// Run the periodic Toda flow and track the spectral data.
    #[arg(long)]
    pub toda: bool,
    #[arg(long, default_value_t = 1e-3, allow_negative_numbers = true)]
    pub dt: f64,
    #[arg(long = "t-end", default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_end: f64,
    /// Tolerance for the consistency checks.
    #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Criterion numbers or groups (painleve, poisson, flow, jacobi), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Replace every floating-point tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}
