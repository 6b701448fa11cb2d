use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::json;

use super::summary::wilson_interval;
use super::{bump, run_accumulate, EngineConfig};
use crate::error::{invalid, Result};
use crate::lattice::{StepDistribution, WalkIncrements};
use crate::oracle::ExactPMF;
use crate::tracker::RangeState;

/// z-score of the binomial intervals around empirical tails.
pub const RATE_Z: f64 = 3.0;

/// Smallest integer `y` with `y >= n x`, robust to the rounding of `n x`.
pub fn threshold(n: u64, x: f64) -> i64 {
    (n as f64 * x - 1e-9).ceil() as i64
}

fn psi(n: u64, tail: f64) -> f64 {
    if tail <= 0.0 {
        f64::INFINITY
    } else {
        // Keeps exact zeros instead of -0.0.
        (-(tail.ln()) / n as f64).max(0.0)
    }
}

/// `psi_n(x) = -(1/n) log P(L_n >= n x)` at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatePoint {
    pub x: f64,
    pub threshold: i64,
    /// Replicates (or paths) with `L_n >= threshold`.
    pub count: u64,
    pub tail: f64,
    pub psi: f64,
    /// Interval for `psi` from the tail interval; equal to `psi` when exact.
    pub psi_lo: f64,
    pub psi_hi: f64,
}

/// Empirical or exact rate curve at horizon `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateCurve {
    pub n: u64,
    /// Replicates; `None` for an exact curve.
    pub reps: Option<u64>,
    pub points: Vec<RatePoint>,
}

/// JSON encoding of a possibly infinite rate: `null` plus a flag.
pub fn rate_json(v: f64) -> serde_json::Value {
    if v.is_infinite() {
        json!({ "value": null, "infinite": true })
    } else {
        json!({ "value": v, "infinite": false })
    }
}

impl RateCurve {
    /// Empirical curve from a histogram of `L_n` over `reps` replicates.
    pub fn from_histogram(n: u64, hist: &[u64], reps: u64, x_grid: &[f64]) -> Self {
        let points = x_grid
            .iter()
            .map(|&x| {
                let y = threshold(n, x);
                let count: u64 = hist.iter().enumerate().filter(|(v, _)| *v as i64 >= y).map(|(_, c)| c).sum();
                let tail = count as f64 / reps as f64;
                let (lo, hi) = wilson_interval(count, reps, RATE_Z);
                RatePoint {
                    x,
                    threshold: y,
                    count,
                    tail,
                    psi: psi(n, tail),
                    psi_lo: psi(n, hi),
                    psi_hi: psi(n, lo),
                }
            })
            .collect();
        RateCurve {
            n,
            reps: Some(reps),
            points,
        }
    }

    /// Exact curve from the law of `L_n`.
    pub fn from_exact(pmf: &ExactPMF, x_grid: &[f64]) -> Self {
        let n = pmf.n as u64;
        let points = x_grid
            .iter()
            .map(|&x| {
                let y = threshold(n, x);
                let tail = pmf.tail(y).to_f64().unwrap_or(0.0);
                let v = psi(n, tail);
                RatePoint {
                    x,
                    threshold: y,
                    count: pmf.tail_count(y).to_u64().unwrap_or(u64::MAX),
                    tail,
                    psi: v,
                    psi_lo: v,
                    psi_hi: v,
                }
            })
            .collect();
        RateCurve { n, reps: None, points }
    }

    /// Nondecreasing in `x` along a sorted grid.
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[0].x > w[1].x || w[0].psi <= w[1].psi)
    }
}

/// Empirical rate curve of `L_n` from `reps` plain Monte Carlo walks.
pub fn ld_curve(dist: &StepDistribution, n: u64, x_grid: &[f64], reps: u64, cfg: &EngineConfig) -> Result<RateCurve> {
    if reps == 0 {
        return invalid("need at least one replicate");
    }
    let hist = run_accumulate(reps, cfg, Vec::new, |_, seed, acc: &mut Vec<u64>| {
        let mut state = RangeState::new(dist.dim());
        for inc in WalkIncrements::new(dist, n as usize, seed, 0) {
            state.push_step(inc);
        }
        bump(acc, state.boundary_len() as usize);
        Ok(())
    })?;
    Ok(RateCurve::from_histogram(n, &hist, reps, x_grid))
}
