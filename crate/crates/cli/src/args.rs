use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gue_piv::Rational;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "gue-piv", version, about = "Exact and high-precision checks for the perturbed Hermite weight")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Also store the report in this directory under a name derived from the
    /// config hash. Existing files are left alone.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, env = "GUE_PIV_WORKERS", global = true)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments q_j(t) of exp(-x^2) (x - t)^(2K).
    Moments(MomentsArgs),
    /// Exact recurrence table: Hankel determinants, alpha, beta, r.
    Recurrence(RecurrenceArgs),
    /// Exact identity checks for gamma = 2K.
    Verify(VerifyArgs),
    /// Generalized Hermite polynomial H(m, n) and its real form.
    Genhermite(GenHermiteArgs),
    /// Hankel determinant closed form and leading coefficients.
    Hankel(HankelArgs),
    /// High-precision pipeline for real gamma >= 0.
    Numeric(NumericArgs),
    /// Monte Carlo estimate of D_n(t) or the partition function.
    Mc(McArgs),
    /// Full exact matrix plus numeric spot checks.
    Suite(SuiteArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct MomentsArgs {
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: u32,
    /// Largest moment index.
    #[arg(long, default_value_t = 8)]
    pub max_index: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct RecurrenceArgs {
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: u32,
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long = "K", conflicts_with = "gamma", required_unless_present = "gamma")]
    #[serde(rename = "K")]
    pub k: Option<u32>,
    /// Even integer multiplicity, as an alternative to --K.
    #[arg(long)]
    pub gamma: Option<Rational>,
    #[arg(long, default_value_t = 4)]
    pub n_max: usize,
    /// Only accepted by `numeric`; given here it is a usage error.
    #[arg(long, hide = true)]
    #[serde(skip)]
    pub prec: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenHermiteArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct HankelArgs {
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: u32,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct NumericArgs {
    #[arg(long)]
    pub gamma: Rational,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Rational,
    /// Largest recurrence index.
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Working precision in decimal digits.
    #[arg(long, env = "GUE_PIV_PRECISION", default_value_t = 60)]
    pub prec: u32,
    /// Check the Painleve IV equation for every n.
    #[arg(long)]
    pub piv: bool,
    /// Check the two difference equations.
    #[arg(long)]
    pub diff: bool,
    #[arg(long, default_value_t = 1e-6)]
    pub fd_step: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "K")]
    #[serde(rename = "K")]
    pub k: u32,
    /// Required unless --partition.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "partition", conflicts_with = "partition")]
    pub t: Option<Rational>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Integrate over t as well.
    #[arg(long)]
    pub partition: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 3)]
    pub k_max: u32,
    #[arg(long, default_value_t = 6)]
    pub n_max: usize,
    /// Skip the numeric spot checks.
    #[arg(long)]
    pub exact_only: bool,
    #[arg(long, env = "GUE_PIV_PRECISION", default_value_t = 60)]
    pub prec: u32,
}
