use serde_json::json;

use super::{run_accumulate, run_replicates_vec, EngineConfig, SummaryStats};
use crate::error::{invalid, Error, Result};
use crate::lattice::{SeedSpec, StepDistribution, WalkIncrements};
use crate::tracker::{RangeState, RangeStats};

/// Snapshots of one tracked walk at each horizon of an increasing grid.
pub fn walk_snapshots(dist: &StepDistribution, seed: SeedSpec, grid: &[u64], p_max: usize) -> Vec<RangeStats> {
    let n_max = grid.last().copied().unwrap_or(0);
    let mut state = RangeState::new(dist.dim());
    let mut out = Vec::with_capacity(grid.len());
    let mut next = grid.iter().peekable();
    while next.peek() == Some(&&0) {
        out.push(state.snapshot(p_max));
        next.next();
    }
    for (t, inc) in WalkIncrements::new(dist, n_max as usize, seed, 0).enumerate() {
        state.push_step(inc);
        while next.peek() == Some(&&(t as u64 + 1)) {
            out.push(state.snapshot(p_max));
            next.next();
        }
    }
    out
}

/// Statistic channels of a [`RangeStats`], multiplicities `1..=p_max`.
fn channels(stats: &RangeStats, p_max: usize) -> Vec<f64> {
    let mut v = vec![stats.boundary as f64, stats.range as f64];
    for p in 1..=p_max {
        v.push(stats.q(p) as f64);
    }
    for p in 1..=p_max {
        v.push(stats.j_exact(p) as f64);
    }
    for p in 1..=p_max {
        v.push(stats.j_atleast(p) as f64);
    }
    v
}

fn channel_names(p_max: usize, suffix: &str) -> Vec<String> {
    let mut v = vec![format!("L{suffix}"), format!("R{suffix}")];
    for name in ["Q", "J_exact", "J_atleast"] {
        for p in 1..=p_max {
            v.push(format!("{name}({p}){suffix}"));
        }
    }
    v
}

/// Named per-channel summaries at one horizon.
#[derive(Clone, Debug)]
pub struct ChannelSummary {
    pub n: u64,
    pub reps: u64,
    pub channels: Vec<(String, SummaryStats)>,
}

impl ChannelSummary {
    pub fn channel(&self, name: &str) -> (String, SummaryStats) {
        self.channels
            .iter()
            .find(|c| c.0 == name)
            .cloned()
            .unwrap_or_else(|| panic!("no channel {name}"))
    }
}

fn checked_snapshots(dist: &StepDistribution, seed: SeedSpec, grid: &[u64], p_max: usize) -> Result<Vec<RangeStats>> {
    // One extra bucket keeps multiplicity p_max itself unpooled.
    let snaps = walk_snapshots(dist, seed, grid, p_max + 1);
    for s in &snaps {
        s.check_invariants().map_err(Error::InvalidInput)?;
    }
    Ok(snaps)
}

/// Replicate means of `L_n/n`, `R_n/n`, `Q_n^(p)/n`, `J_n^(p)/n`, `J_n^p/n`.
/// Every sampled path is checked against the combinatorial invariants.
pub fn simulate_ln_over_n(dist: &StepDistribution, n: u64, reps: u64, p_max: usize, cfg: &EngineConfig) -> Result<ChannelSummary> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let names = channel_names(p_max, "/n");
    let stats = run_replicates_vec(reps, names.len(), cfg, |_, seed| {
        let s = checked_snapshots(dist, seed, &[n], p_max)?;
        Ok(channels(&s[0], p_max).into_iter().map(|x| x / n as f64).collect())
    })?;
    Ok(ChannelSummary {
        n,
        reps,
        channels: names.into_iter().zip(stats).collect(),
    })
}

/// Reference levels for the planar scaling curves.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ScalingReferences {
    pub half_pi_sq: f64,
    pub pi_sq: f64,
    pub two_pi_sq: f64,
    pub ctilde: f64,
    /// `p -> [c^(p-1) pi^2/4, c^(p-1) pi^2]` for `J^(p)`.
    pub j_exact_band: Vec<(f64, f64)>,
    /// `p -> [c^(p-1) pi^2/2, 2 c^(p-1) pi^2]` for `J^p`.
    pub j_atleast_band: Vec<(f64, f64)>,
}

impl ScalingReferences {
    pub fn new(ctilde: f64, p_max: usize) -> Self {
        let pi_sq = std::f64::consts::PI.powi(2);
        let scale = |p: usize| ctilde.powi(p as i32 - 1);
        ScalingReferences {
            half_pi_sq: pi_sq / 2.0,
            pi_sq,
            two_pi_sq: 2.0 * pi_sq,
            ctilde,
            j_exact_band: (1..=p_max).map(|p| (scale(p) * pi_sq / 4.0, scale(p) * pi_sq)).collect(),
            j_atleast_band: (1..=p_max).map(|p| (scale(p) * pi_sq / 2.0, 2.0 * scale(p) * pi_sq)).collect(),
        }
    }
}

/// Planar curves of `E stat * (log n)^2 / n` over an `n` grid, one walk per
/// replicate observed at every grid point.
pub fn scaling_2d(
    n_grid: &[u64],
    reps: u64,
    p_max: usize,
    ctilde: f64,
    cfg: &EngineConfig,
) -> Result<(Vec<ChannelSummary>, ScalingReferences)> {
    let mut grid = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    if grid.is_empty() || grid[0] < 2 {
        return invalid("n grid must be nonempty with every n >= 2");
    }
    let dist = StepDistribution::simple(2);
    let width = channel_names(p_max, "").len();
    let stats = run_accumulate(
        reps,
        cfg,
        || vec![vec![SummaryStats::new(); width]; grid.len()],
        |_, seed, acc: &mut Vec<Vec<SummaryStats>>| {
            for ((snap, row), &n) in checked_snapshots(&dist, seed, &grid, p_max)?.iter().zip(acc.iter_mut()).zip(&grid) {
                let scale = (n as f64).ln().powi(2) / n as f64;
                for (s, x) in row.iter_mut().zip(channels(snap, p_max)) {
                    s.push(x * scale);
                }
            }
            Ok(())
        },
    )?;
    let names = channel_names(p_max, "*log^2(n)/n");
    let curves = grid
        .iter()
        .zip(stats)
        .map(|(&n, row)| ChannelSummary {
            n,
            reps,
            channels: names.iter().cloned().zip(row).collect(),
        })
        .collect();
    Ok((curves, ScalingReferences::new(ctilde, p_max)))
}

impl super::Accumulator for Vec<Vec<SummaryStats>> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            super::Accumulator::merge(a, b);
        }
    }
}

/// JSON view of a channel summary.
pub fn channel_json(s: &ChannelSummary) -> serde_json::Value {
    json!({
        "n": s.n,
        "reps": s.reps,
        "channels": s.channels.iter().map(|(k, v)| json!({"name": k, "mean": v.mean, "stderr": v.stderr()})).collect::<Vec<_>>(),
    })
}
