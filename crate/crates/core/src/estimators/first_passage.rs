//! Estimators built on return and hitting times: `v`, `q`, the two-sided
//! events behind the multiple-point limits, avoidance of `{0, b}`, and `c~`.

use serde_json::json;

use super::walkers::{planar_first_hit, TwoPointHit, Walker, LANE_AUX_BASE, LANE_DUAL, LANE_FORWARD};
use super::{run_accumulate, BracketEstimate, Direction, EngineConfig, EventTimes, SummaryStats, SurvivalCurve};
use crate::error::{invalid, Result};
use crate::lattice::{SeedSpec, StepDistribution, StepSampler};

fn sorted_grid(grid: &[u64]) -> Result<Vec<u64>> {
    if grid.is_empty() {
        return invalid("empty horizon grid");
    }
    let mut g = grid.to_vec();
    g.sort_unstable();
    g.dedup();
    Ok(g)
}

/// First return time to the origin by `cap`, on one lane.
fn return_time(dist: &StepDistribution, sampler: &StepSampler, seed: SeedSpec, lane: u64, cap: u64) -> Option<u64> {
    let mut w = Walker::new(dist, sampler, seed, lane, 1);
    for t in 1..=cap {
        w.step();
        if w.at_origin() {
            return Some(t);
        }
    }
    None
}

/// Empirical law of the first return time, censored at `cap`.
pub fn no_return_curve(dist: &StepDistribution, cap: u64, reps: u64, cfg: &EngineConfig) -> Result<SurvivalCurve> {
    let sampler = StepSampler::for_distribution(dist);
    let events = run_accumulate(reps, cfg, EventTimes::default, |_, seed, acc| {
        acc.record(return_time(dist, &sampler, seed, LANE_FORWARD, cap));
        Ok(())
    })?;
    Ok(SurvivalCurve::new(events, cap))
}

/// `P(no return by k)` on a horizon grid; each member lies above `v`.
pub fn estimate_v(dist: &StepDistribution, k_grid: &[u64], reps: u64, cfg: &EngineConfig) -> Result<Vec<BracketEstimate>> {
    let grid = sorted_grid(k_grid)?;
    let curve = no_return_curve(dist, *grid.last().unwrap(), reps, cfg)?;
    Ok(grid
        .iter()
        .map(|&k| {
            let s = curve.summary(k);
            let mut meta = json!({ "event": "no return to the origin by time k" });
            if dist.dim() == 2 && k > 1 {
                meta["times_log_k"] = json!(s.mean * (k as f64).ln());
            }
            BracketEstimate {
                name: "v".into(),
                truncation: k,
                lower: None,
                upper: Some(s),
                direction: Direction::Above,
                meta,
            }
        })
        .collect())
}

/// The finite-horizon value of `v^2` that matches `Q_n^(1) / n`:
/// `(1/n) sum_{i=0..n} P(T > i) P(T > n - i)` from an empirical curve.
pub fn pitt_finite_horizon(curve: &SurvivalCurve, n: u64) -> f64 {
    let s = curve.dense(n);
    (0..=n as usize).map(|i| s[i] * s[n as usize - i]).sum::<f64>() / n as f64
}

/// Tracks the neighbors of the origin covered by a walk, with first hit times.
struct Cover {
    first: Vec<u64>,
    mask: u64,
}

impl Cover {
    fn new(d: usize) -> Self {
        Cover {
            first: vec![u64::MAX; 2 * d],
            mask: 0,
        }
    }

    #[inline]
    fn visit(&mut self, w: &Walker, t: u64) {
        if let Some(i) = w.neighbor_index() {
            if self.mask & 1 << i == 0 {
                self.mask |= 1 << i;
                self.first[i] = t;
            }
        }
    }
}

/// Survival times of the two-sided events from one replicate, in `1..=cap+1`
/// (`cap + 1` means the event still holds at the cap).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoSidedTimes {
    /// `A_k` holds iff `k < theta`.
    pub theta: u64,
    /// Same, with the dual walk also required not to return.
    pub theta_two_sided: u64,
}

/// Runs the forward and dual walks of one replicate up to `cap`, stopping as
/// soon as both survival times are determined.
pub fn two_sided_times(dist: &StepDistribution, sampler: &StepSampler, seed: SeedSpec, cap: u64) -> TwoSidedTimes {
    let d = dist.dim();
    let full = (1u64 << (2 * d)) - 1;
    let mut fwd = Walker::new(dist, sampler, seed, LANE_FORWARD, 1);
    let mut fcov = Cover::new(d);
    let mut t_ret = None;
    for t in 1..=cap {
        fwd.step();
        if fwd.at_origin() {
            t_ret = Some(t);
            break;
        }
        fcov.visit(&fwd, t);
    }
    let limit = t_ret.unwrap_or(cap);
    // Forward hits in time order, merged into the coverage as the dual advances.
    let mut pending: Vec<(u64, usize)> = fcov
        .first
        .iter()
        .enumerate()
        .filter(|(_, &t)| t != u64::MAX)
        .map(|(i, &t)| (t, i))
        .collect();
    pending.sort_unstable();
    let mut pending = pending.into_iter().peekable();
    let mut fmask = 0u64;
    let mut dual = Walker::new(dist, sampler, seed, LANE_DUAL, -1);
    let mut dcov = Cover::new(d);
    let mut dual_ret = None;
    let mut covered = None;
    for t in 1..=limit {
        while let Some(&(ft, i)) = pending.peek() {
            if ft > t {
                break;
            }
            fmask |= 1 << i;
            pending.next();
        }
        dual.step();
        if dual_ret.is_none() && dual.at_origin() {
            dual_ret = Some(t);
        }
        dcov.visit(&dual, t);
        if fmask | dcov.mask == full {
            covered = Some(t);
            break;
        }
    }
    let theta = [t_ret, covered].into_iter().flatten().min().unwrap_or(cap + 1);
    let theta_two_sided = match dual_ret {
        Some(r) => theta.min(r),
        None => theta,
    };
    TwoSidedTimes { theta, theta_two_sided }
}

/// `P(A_k)` on a horizon grid from one set of replicates (pathwise monotone
/// in `k`), optionally with the lower companion `E L_n / n`.
pub fn estimate_q(
    dist: &StepDistribution,
    k_grid: &[u64],
    reps: u64,
    companion: Option<(u64, u64)>,
    cfg: &EngineConfig,
) -> Result<Vec<BracketEstimate>> {
    let grid = sorted_grid(k_grid)?;
    let cap = *grid.last().unwrap();
    let sampler = StepSampler::for_distribution(dist);
    let (one, two) = run_accumulate(
        reps,
        cfg,
        || (EventTimes::default(), EventTimes::default()),
        |_, seed, acc: &mut (EventTimes, EventTimes)| {
            let t = two_sided_times(dist, &sampler, seed, cap);
            acc.0.record((t.theta <= cap).then_some(t.theta));
            acc.1.record((t.theta_two_sided <= cap).then_some(t.theta_two_sided));
            Ok(())
        },
    )?;
    let (one, two) = (SurvivalCurve::new(one, cap), SurvivalCurve::new(two, cap));
    let lower = match companion {
        Some((n, creps)) => Some((n, super::simulate_ln_over_n(dist, n, creps, 1, cfg)?.channel("L/n").1)),
        None => None,
    };
    Ok(grid
        .iter()
        .map(|&k| BracketEstimate {
            name: "q".into(),
            truncation: k,
            lower: lower.map(|l| l.1),
            upper: Some(one.summary(k)),
            direction: Direction::Above,
            meta: json!({
                "upper": "P(A_k)",
                "lower": lower.map(|l| format!("mean L_n/n at n={}", l.0)),
                "two_sided_no_return": one_line(&two.summary(k)),
            }),
        })
        .collect())
}

fn one_line(s: &SummaryStats) -> serde_json::Value {
    json!({ "mean": s.mean, "stderr": s.stderr(), "count": s.count })
}

/// Estimates for the limits of `J_n^(p) / n` and `J_n^p / n`.
#[derive(Clone, Debug)]
pub struct Theorem2Estimate {
    pub p: usize,
    /// `J^(p)`: additionally no dual return.
    pub exact: BracketEstimate,
    /// `J^p`.
    pub at_least: BracketEstimate,
}

/// Per-replicate indicators: (cap counts 0, cap counts as returned) for
/// `J^(p)` and `J^p`, and the number of capped auxiliary walks.
fn theorem2_replicate(
    dist: &StepDistribution,
    sampler: &StepSampler,
    seed: SeedSpec,
    p: usize,
    k: u64,
) -> ([f64; 4], u64) {
    let d = dist.dim();
    let full = (1u64 << (2 * d)) - 1;
    let zero = ([0.0; 4], 0);
    let mut fwd = Walker::new(dist, sampler, seed, LANE_FORWARD, 1);
    let mut fcov = Cover::new(d);
    for t in 1..=k {
        fwd.step();
        if fwd.at_origin() {
            return zero;
        }
        fcov.visit(&fwd, t);
    }
    let mut mask = fcov.mask;
    let mut capped = 0;
    for i in 0..p.saturating_sub(1) {
        let mut aux = Walker::new(dist, sampler, seed, LANE_AUX_BASE + i as u64, 1);
        let mut cov = Cover::new(d);
        let mut returned = false;
        for t in 1..=k {
            aux.step();
            if aux.at_origin() {
                returned = true;
                break;
            }
            cov.visit(&aux, t);
        }
        mask |= cov.mask;
        if !returned {
            capped += 1;
        }
        if mask == full {
            return (zero.0, capped);
        }
    }
    let mut dual = Walker::new(dist, sampler, seed, LANE_DUAL, -1);
    let mut dcov = Cover::new(d);
    let mut dual_returned = false;
    for t in 1..=k {
        dual.step();
        dual_returned |= dual.at_origin();
        dcov.visit(&dual, t);
        if mask | dcov.mask == full {
            return (zero.0, capped);
        }
    }
    let at_least_up = 1.0;
    let at_least_lo = if capped == 0 { 1.0 } else { 0.0 };
    let (exact_lo, exact_up) = if dual_returned { (0.0, 0.0) } else { (at_least_lo, at_least_up) };
    ([exact_lo, exact_up, at_least_lo, at_least_up], capped)
}

/// Composite sampling of the multiple-point limit events at horizon `k`:
/// forward and dual walks of `k` steps and `p - 1` auxiliary walks run until
/// they return to the origin or reach the cap `k`.
///
/// `lower` counts a capped auxiliary walk as failure; `upper` counts it as a
/// return that covered only its prefix, which enlarges the event. The gap
/// between them is the cap bias, reported in `meta`.
pub fn estimate_theorem2_limit(
    dist: &StepDistribution,
    p: usize,
    k: u64,
    reps: u64,
    cfg: &EngineConfig,
) -> Result<Theorem2Estimate> {
    if p == 0 {
        return invalid("multiplicity p must be at least 1");
    }
    let sampler = StepSampler::for_distribution(dist);
    // Indicator counts are exact, so summaries match `estimate_q` bit for bit at p = 1.
    let counts = run_accumulate(
        reps,
        cfg,
        || vec![0u64; 5],
        |_, seed, acc: &mut Vec<u64>| {
            let (ind, c) = theorem2_replicate(dist, &sampler, seed, p, k);
            for (s, x) in acc.iter_mut().zip(ind) {
                *s += x as u64;
            }
            acc[4] += c;
            Ok(())
        },
    )?;
    let stats: Vec<SummaryStats> = counts[..4].iter().map(|&c| SummaryStats::from_bernoulli(c, reps)).collect();
    let capped = counts[4];
    let aux_total = reps * (p as u64 - 1);
    let make = |name: &str, lo: SummaryStats, up: SummaryStats| BracketEstimate {
        name: name.into(),
        truncation: k,
        lower: Some(lo),
        upper: Some(up),
        direction: if p == 1 { Direction::Above } else { Direction::Mixed },
        meta: json!({
            "p": p,
            "cap_bias": up.mean - lo.mean,
            "capped_aux_walks": capped,
            "aux_walks": aux_total,
            "lower": "capped auxiliary walks count as failure",
            "upper": "capped auxiliary walks count as returned",
        }),
    };
    Ok(Theorem2Estimate {
        p,
        exact: make("J_exact_limit", stats[0], stats[1]),
        at_least: make("J_atleast_limit", stats[2], stats[3]),
    })
}

/// Law of the first visit to `{0, b}` at times `>= 1` of the planar simple
/// walk from the origin, censored at `cap`, split by which site came first.
pub fn planar_two_point_hits(cap: u64, reps: u64, cfg: &EngineConfig) -> Result<(SurvivalCurve, u64, u64)> {
    let (events, counts) = run_accumulate(
        reps,
        cfg,
        || (EventTimes::default(), vec![0u64; 2]),
        |_, seed, acc: &mut (EventTimes, Vec<u64>)| {
            let hit = planar_first_hit(seed, LANE_FORWARD, cap);
            acc.0.record(hit.map(|h| h.0));
            match hit {
                Some((_, TwoPointHit::Origin)) => acc.1[0] += 1,
                Some((_, TwoPointHit::Neighbor)) => acc.1[1] += 1,
                None => {}
            }
            Ok(())
        },
    )?;
    Ok((SurvivalCurve::new(events, cap), counts[0], counts[1]))
}

/// Avoidance probability of `{0, b}` from the origin at each `n`, with
/// `estimate * log n` in `meta`.
pub fn estimate_gamma(n_grid: &[u64], reps: u64, cfg: &EngineConfig) -> Result<Vec<(u64, SummaryStats, serde_json::Value)>> {
    let grid = sorted_grid(n_grid)?;
    let (curve, _, _) = planar_two_point_hits(*grid.last().unwrap(), reps, cfg)?;
    Ok(grid
        .iter()
        .map(|&n| {
            let s = curve.summary(n);
            let log_n = (n as f64).ln();
            let mut meta = json!({ "times_log_n": s.mean * log_n, "times_log_n_stderr": s.stderr() * log_n });
            if n as usize <= crate::oracle::DEFAULT_DP_BUDGET {
                let exact = crate::oracle::avoidance_series::<f64>(crate::oracle::AvoidFrom::Origin, (1, 0), n as usize);
                meta["oracle"] = json!(exact[n as usize]);
            }
            (n, s, meta)
        })
        .collect())
}

/// Bracket for `c~ = P(T_0 < T_b)`: the lower member counts hits of 0 first
/// by the cap, the upper member is one minus hits of `b` first by the cap.
pub fn estimate_ctilde(cap: u64, reps: u64, cfg: &EngineConfig) -> Result<BracketEstimate> {
    let (curve, origin_first, b_first) = planar_two_point_hits(cap, reps, cfg)?;
    let lower = SummaryStats::from_bernoulli(origin_first, reps);
    let upper = SummaryStats::from_bernoulli(reps - b_first, reps);
    Ok(BracketEstimate {
        name: "ctilde".into(),
        truncation: cap,
        lower: Some(lower),
        upper: Some(upper),
        direction: Direction::Mixed,
        meta: json!({ "unresolved_fraction": curve.survival(cap), "b": [1, 0] }),
    })
}
