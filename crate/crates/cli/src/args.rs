use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "landau-cs", version, about = "Generalized su(2) coherent states for Landau levels")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand. Lists are comma separated.
#[derive(Debug, Clone, Default, Args)]
pub struct GlobalArgs {
    /// Landau level(s)
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,

    /// Generalization order(s)
    #[arg(long, global = true, value_delimiter = ',')]
    pub r: Option<Vec<u32>>,

    /// |z|^2 value(s)
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub t: Option<Vec<f64>>,

    /// Phase(s) of z in radians
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub phi: Option<Vec<f64>>,

    #[arg(long, global = true)]
    pub hbar: Option<f64>,

    #[arg(long, global = true)]
    pub mass: Option<f64>,

    #[arg(long, global = true)]
    pub omega: Option<f64>,

    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads; 0 picks the number of cores
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// File of `key = value` lines mirroring these flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Momentum operator convention
    #[arg(long, global = true, value_enum)]
    pub momentum: Option<Momentum>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// All moments and squeezing measures at one point, closed form against the oracle
    Expect,
    /// Data sweep for one of the figures
    Figure(FigureArgs),
    /// Run a verification suite
    Verify(VerifyArgs),
    /// Coefficients of |z>_r
    State(StateArgs),
    /// Identity-resolving measure: moment table or density curve
    Measure(MeasureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub id: FigureId,

    #[command(flatten)]
    pub range: RangeArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RangeArgs {
    #[arg(long)]
    pub t_min: Option<f64>,

    #[arg(long)]
    pub t_max: Option<f64>,

    /// Number of t samples, endpoints included
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,

    /// Replace every tolerance of the suite
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    /// Build through the deformed exponential instead of the series coefficients
    #[arg(long)]
    pub deformed: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// Emit the density on a t grid instead of the moment table
    #[arg(long)]
    pub density: bool,

    #[command(flatten)]
    pub range: RangeArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Momentum {
    Corrected,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    States,
    Observables,
    Measure,
    All,
}

impl FigureId {
    pub const ALL_FIGURES: [FigureId; 8] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Custom => "custom",
        }
    }
}
