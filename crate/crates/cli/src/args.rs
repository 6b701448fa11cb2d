use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "rangewalk", version, about = "Range and inner-boundary statistics of lattice random walks")]
pub struct Cli {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Worker threads (0 = all cores). Results do not depend on it.
    #[arg(long, global = true, env = "RANGEWALK_WORKERS", default_value_t = 0)]
    pub workers: usize,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// Label used in output file names instead of the current time.
    #[arg(long, global = true)]
    pub stamp: Option<String>,

    /// Re-run the configuration recorded in a manifest.
    #[arg(long, global = true)]
    pub from_manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct DistArgs {
    /// Lattice dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,

    /// Built-in step law: `simple` (with --d) or `simple d=<k>`.
    #[arg(long, default_value = "simple")]
    pub preset: String,

    /// Step law file: one atom per line, `dx dy ... p`.
    #[arg(long, conflicts_with = "preset")]
    pub dist_file: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Track range statistics on generated walks.
    Simulate {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 100)]
        reps: u64,
        #[arg(long, default_value_t = 8)]
        p_max: usize,
    },
    /// Exact law of a statistic by path enumeration.
    Enumerate {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = StatKind::L)]
        stat: StatKind,
        /// Multiplicity for q, j-exact and j-atleast.
        #[arg(long, default_value_t = 1)]
        p: usize,
        /// Enumeration budget in path-steps.
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
    /// Exact identity and inequality checks.
    Identity {
        #[command(subcommand)]
        which: IdentityKind,
    },
    /// Monte Carlo estimators of the limit constants.
    Estimate {
        #[command(subcommand)]
        which: EstimateKind,
    },
    /// Empirical large-deviation rate curve of the inner boundary size.
    LdCurve {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        n: u64,
        /// Comma-separated grid of x values.
        #[arg(long, value_delimiter = ',', default_value = "0,0.2,0.4,0.6,0.8,1.0,1.2")]
        x: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        /// Also emit the exact curve from enumeration.
        #[arg(long)]
        exact: bool,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
    /// Planar scaling curves `E stat (log n)^2 / n`.
    #[command(name = "scaling-2d")]
    Scaling2d {
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        n: Vec<u64>,
        #[arg(long, default_value_t = 20)]
        reps: u64,
        #[arg(long, default_value_t = 4)]
        p_max: usize,
        /// Box radius of the harmonic solver that supplies c~.
        #[arg(long, default_value_t = 128)]
        r: usize,
    },
    /// Whether the step support generates the whole lattice.
    ValidateSupport {
        #[command(flatten)]
        dist: DistArgs,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatKind {
    L,
    R,
    Q,
    JExact,
    JAtleast,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    A,
    TwoSided,
    NoReturn,
}

#[derive(Subcommand, Debug, Clone)]
pub enum IdentityKind {
    /// Last-exit decomposition over `{0, b}` for the planar walk.
    LastExit {
        #[arg(long)]
        n: usize,
        /// Evaluate in floating point instead of exact rationals.
        #[arg(long)]
        float: bool,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
    },
    /// Shifted tail monotonicity of the inner boundary size.
    Note2 {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        v_max: usize,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
    /// Exact probability of a two-sided event at horizons `0..=k`.
    Event {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = EventKind::A)]
        event: EventKind,
        #[arg(long, default_value_t = 100_000_000)]
        budget: u128,
    },
    /// Avoidance of `{0, b}` from 0 and from b, exactly, for all n up to a bound.
    Avoidance {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2000)]
        budget: usize,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum EstimateKind {
    /// `P(A_k)` on a horizon grid, with an optional `L_n / n` companion.
    Q {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
        k: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long)]
        companion_n: Option<u64>,
        #[arg(long, default_value_t = 100)]
        companion_reps: u64,
    },
    /// Probability of no return by k.
    V {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        k: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
    },
    /// Bracket for `P(T_0 < T_b)` plus the harmonic solver.
    Ctilde {
        #[arg(long, default_value_t = 100_000)]
        m: u64,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
        #[arg(long, value_delimiter = ',', default_value = "128")]
        r: Vec<usize>,
    },
    /// Avoidance of `{0, b}` by the planar walk.
    Gamma {
        #[arg(long, value_delimiter = ',', default_value = "1,200,10000")]
        n: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
    },
    /// Limits of `J^(p) / n` and `J^p / n`.
    Theorem2 {
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 1000)]
        k: u64,
        #[arg(long, default_value_t = 10_000)]
        reps: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Enumerate { .. } => "enumerate",
            Command::Identity { .. } => "identity",
            Command::Estimate { .. } => "estimate",
            Command::LdCurve { .. } => "ld-curve",
            Command::Scaling2d { .. } => "scaling-2d",
            Command::ValidateSupport { .. } => "validate-support",
        }
    }
}
