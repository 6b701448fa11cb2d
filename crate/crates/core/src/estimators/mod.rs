//! Monte Carlo engine and estimators of the limit constants.
//!
//! Every estimator is a pure function of its parameters and an
//! [`EngineConfig`]; results do not depend on the number of workers.

mod engine;
mod first_passage;
mod harmonic;
mod output;
mod rate;
mod simulate;
mod summary;
mod survival;
pub mod walkers;

pub use engine::{bump, run_accumulate, run_replicates, run_replicates_vec, Accumulator, EngineConfig, DEFAULT_BLOCK};
pub use first_passage::{
    estimate_ctilde, estimate_gamma, estimate_q, estimate_theorem2_limit, estimate_v, no_return_curve,
    pitt_finite_horizon, planar_two_point_hits, two_sided_times, Theorem2Estimate, TwoSidedTimes,
};
pub use harmonic::{harmonic_ctilde, HarmonicResult};
pub use output::CsvRow;
pub use rate::{ld_curve, rate_json, threshold, RateCurve, RatePoint, RATE_Z};
pub use simulate::{channel_json, scaling_2d, simulate_ln_over_n, walk_snapshots, ChannelSummary, ScalingReferences};
pub use summary::{combined_stderr, wilson_interval, BracketEstimate, Direction, SummaryStats, DEFAULT_LEVEL};
pub use survival::{EventTimes, SurvivalCurve};
