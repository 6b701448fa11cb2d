//! Exact small-scale computations: path enumeration, planar lattice DP, and
//! exact checks of the identities and inequalities behind the estimators.

mod enumerate;
mod events;
mod grid;
mod note2;
mod planar;
mod pmf;

pub use enumerate::{exact_distribution, exact_distributions_by_depth, fold_paths, PathNode, Statistic};
pub use events::{exact_event_probability, exact_event_probabilities, Event};
pub use grid::{DpMass, GridDP};
pub use note2::{note2_check, Note2Report, TailComparison};
pub use planar::{
    avoidance_probability, avoidance_probability_exact, avoidance_series, last_exit_identity_residual,
    last_exit_identity_residual_exact, last_exit_residuals, last_exit_residuals_exact, occupation_probability,
    occupation_probability_exact, occupation_series, planar_neighbor, AvoidFrom, DEFAULT_DP_BUDGET,
};
pub use pmf::ExactPMF;

use crate::error::{Error, Result};

/// Default cap on enumeration work, in path-steps.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 100_000_000;

/// Path-steps visited by a full depth-first enumeration: `s + s^2 + ... + s^n`.
pub fn enumeration_cost(s: usize, n: usize) -> u128 {
    let s = s as u128;
    let mut level: u128 = 1;
    let mut total: u128 = 0;
    for _ in 0..n {
        level = level.saturating_mul(s);
        total = total.saturating_add(level);
    }
    total
}

pub(crate) fn check_budget(what: &str, required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::Budget {
            what: what.to_string(),
            required,
            budget,
        });
    }
    Ok(())
}
