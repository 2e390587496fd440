use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpnl_core::analysis::{Column, Format, NMode};
use dpnl_core::CostKind;

use crate::mech::Mech;

#[derive(Debug, Parser)]
#[command(
    name = "dpnl",
    version,
    about = "Noise calibration and checking for (ε, δ)-differential privacy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print calibrated parameters and expected noise costs
    #[command(allow_negative_numbers = true)]
    Calibrate(CalibrateArgs),
    /// Draw noise samples, one per line
    #[command(allow_negative_numbers = true)]
    Sample(SampleArgs),
    /// Print lower and upper bounds on the minimum noise cost
    #[command(allow_negative_numbers = true)]
    Bounds(BoundsArgs),
    /// Check the privacy constraint on a grid; exit 1 if it fails
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Sweep bounds and mechanism costs over an (ε, δ) grid
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Answer a count, sum or mean over a CSV column with noise
    #[command(allow_negative_numbers = true)]
    Query(QueryArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CostArg {
    Amplitude,
    Power,
}

impl From<CostArg> for CostKind {
    fn from(c: CostArg) -> Self {
        match c {
            CostArg::Amplitude => CostKind::Amplitude,
            CostArg::Power => CostKind::Power,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum NModeArg {
    Fractional,
    Floor,
    Both,
}

impl From<NModeArg> for NMode {
    fn from(n: NModeArg) -> Self {
        match n {
            NModeArg::Fractional => NMode::Fractional,
            NModeArg::Floor => NMode::Floor,
            NModeArg::Both => NMode::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Svg,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
            FormatArg::Svg => Format::Svg,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ColumnArg {
    RatioBounds,
    RatioTlGauss,
}

impl From<ColumnArg> for Column {
    fn from(c: ColumnArg) -> Self {
        match c {
            ColumnArg::RatioBounds => Column::RatioBounds,
            ColumnArg::RatioTlGauss => Column::RatioTlGauss,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Aggregate {
    Count,
    Sum,
    Mean,
}

/// Options shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Flat `key = value` file of default flag values
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MechArgs {
    /// Privacy loss ε
    #[arg(long)]
    pub eps: Option<f64>,
    /// Privacy slack δ
    #[arg(long)]
    pub delta: Option<f64>,
    /// Query sensitivity Δ
    #[arg(long, default_value_t = 1.0)]
    pub sens: f64,
    #[arg(long, value_enum, default_value_t = Mech::Trunclap)]
    pub mech: Mech,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub mech: MechArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub mech: MechArgs,
    /// Number of samples
    #[arg(long, default_value_t = 1)]
    pub n: u64,
    /// Seed of the noise stream; entropy when absent
    #[arg(long, env = "DPNL_SEED")]
    pub seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub delta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sens: f64,
    #[arg(long, value_enum, default_value_t = CostArg::Amplitude)]
    pub cost: CostArg,
    /// Staircase length behind the reported `lower`
    #[arg(long, value_enum, default_value_t = NModeArg::Fractional)]
    pub n_mode: NModeArg,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub mech: MechArgs,
    /// Cell width; must divide the sensitivity [default: sens/1000]
    #[arg(long)]
    pub grid_step: Option<f64>,
    /// Judge against this δ instead of the calibration δ
    #[arg(long)]
    pub check_delta: Option<f64>,
    /// Multiply the calibrated Gaussian σ by this factor
    #[arg(long)]
    pub sigma_scale: Option<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1e-4)]
    pub eps_lo: f64,
    #[arg(long, default_value_t = 10.0)]
    pub eps_hi: f64,
    #[arg(long, default_value_t = 20)]
    pub eps_points: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub delta_lo: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta_hi: f64,
    #[arg(long, default_value_t = 20)]
    pub delta_points: usize,
    /// Space grid points logarithmically
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub log_spacing: bool,
    #[arg(long, default_value_t = 1.0)]
    pub sens: f64,
    #[arg(long, value_enum, default_value_t = CostArg::Amplitude)]
    pub cost: CostArg,
    #[arg(long, value_enum, default_value_t = NModeArg::Fractional)]
    pub n_mode: NModeArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,
    /// Column drawn by the SVG heatmap
    #[arg(long, value_enum, default_value_t = ColumnArg::RatioTlGauss)]
    pub column: ColumnArg,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    /// CSV file with a header row
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Column to aggregate; required for sum and mean
    #[arg(long)]
    pub column: Option<String>,
    #[arg(long, value_enum)]
    pub aggregate: Aggregate,
    #[arg(long)]
    pub clip_lo: Option<f64>,
    #[arg(long)]
    pub clip_hi: Option<f64>,
    #[arg(long)]
    pub eps: f64,
    /// Ignored by the Laplace mechanism, which spends no δ
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_enum, default_value_t = Mech::Trunclap)]
    pub mech: Mech,
    #[arg(long, env = "DPNL_SEED")]
    pub seed: Option<u64>,
    /// JSON-lines budget ledger
    #[arg(long, value_name = "PATH", default_value = "dpnl-ledger.jsonl")]
    pub ledger: PathBuf,
    /// Refuse the query if total ε would exceed this
    #[arg(long)]
    pub max_eps: Option<f64>,
    /// Refuse the query if total δ would exceed this
    #[arg(long)]
    pub max_delta: Option<f64>,
    /// Identifier recorded in the ledger [default: q<entry number>]
    #[arg(long)]
    pub id: Option<String>,
    #[command(flatten)]
    pub common: Common,
}
