use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_BUDGET: u128 = 50_000_000;

#[derive(Debug, Parser)]
#[command(name = "antichain", version, about = "Projection inequalities for antichains: experiments and checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for parallel scans.
    #[arg(long, global = true, env = "ANTICHAIN_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Upper limit on the work of exponential scans.
    #[arg(long, global = true)]
    pub budget: Option<u128>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Order {
    /// `x <= y` and `x != y`.
    Strict,
    /// Strictly smaller in every coordinate.
    Weak,
}

/// A surface given by family name and parameters, or by a descriptor file.
#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// `hyperplane`, `lpsphere`, `staircase`, or a path to a descriptor file.
    #[arg(long)]
    pub surface: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a point file as antichain / weak antichain.
    Check {
        #[arg(long)]
        points: PathBuf,
    },
    /// Greedy partition certificate of a weak antichain.
    Partition {
        #[arg(long)]
        points: PathBuf,
    },
    /// Projection sizes and the gap `sum |pi_i(A)| - |A|`.
    Gap {
        #[arg(long)]
        points: PathBuf,
    },
    /// Minimum gap over weak antichains of `k` points in `[0,m)^n`.
    GapScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        k: usize,
        /// Sample this many random weak antichains instead of enumerating.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Width of the grid `{0..m-1}^n`.
    Width {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Order::Strict)]
        order: Order,
        /// Report the closed-form construction instead of matching.
        #[arg(long)]
        construction: bool,
    },
    /// Points of the grid with coordinate sum `level` (middle layer by default).
    Layer {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Points of the grid with a zero coordinate.
    Wn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Cube cover of a surface or point file.
    Cover {
        #[arg(long, conflicts_with = "m_list")]
        m: Option<usize>,
        /// Comma-separated resolutions; emits a curve and a box dimension.
        #[arg(long, value_delimiter = ',')]
        m_list: Option<Vec<usize>>,
        #[arg(long, conflicts_with = "points")]
        surface: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        depth: Option<u32>,
        /// Real point file with coordinates in `[0,1]`.
        #[arg(long)]
        points: Option<PathBuf>,
    },
    /// Surface measure, or the measure of one projection with `--axis`.
    Measure {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// 0-based axis deleted by the projection.
        #[arg(long)]
        axis: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Check `H(A) <= sum_i H(pi_i A)`; exit 2 if it fails.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compare a planar graph's length with its skewed projections; exit 2 if it fails.
    Skew2d {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Apply the shear (or its inverse) to a real point file.
    Shear {
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        inverse: bool,
        /// Also sample this many pairs against the inverse Lipschitz bound.
        #[arg(long)]
        check_pairs: Option<usize>,
    },
    /// Volume of the central slab of width `c` in `[0,1]^n`.
    Slab {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
    },
    /// Length of the depth-`k` singular staircase.
    Staircase {
        #[arg(long)]
        depth: u32,
        /// Include the polyline vertices.
        #[arg(long)]
        vertices: bool,
    },
    /// Surface measures of the lp spheres over a list of exponents.
    PSweep {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32,64")]
        p_list: Vec<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
}
