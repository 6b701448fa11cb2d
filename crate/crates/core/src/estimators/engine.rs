//! Deterministic replicate engine.
//!
//! Replicates are cut into fixed blocks of consecutive indices. Each block is
//! folded serially by one worker, and block results are merged in block
//! order, so outputs are bit-identical for any worker count.

use rayon::prelude::*;

use super::SummaryStats;
use crate::error::{Error, Result};
use crate::lattice::SeedSpec;

pub const DEFAULT_BLOCK: u64 = 256;

/// Master seed, pool size and block length of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub seed: u64,
    /// Worker threads; 0 means the number of available cores.
    pub workers: usize,
    pub block: u64,
}

impl EngineConfig {
    pub fn new(seed: u64, workers: usize) -> Self {
        EngineConfig {
            seed,
            workers,
            block: DEFAULT_BLOCK,
        }
    }
}

/// A commutative monoid folded over replicates.
pub trait Accumulator: Send {
    fn merge(&mut self, other: Self);
}

impl Accumulator for SummaryStats {
    fn merge(&mut self, other: Self) {
        SummaryStats::merge(self, &other);
    }
}

impl Accumulator for Vec<SummaryStats> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(&other) {
            a.merge(b);
        }
    }
}

/// Counts indexed by a small nonnegative integer (a histogram).
impl Accumulator for Vec<u64> {
    fn merge(&mut self, other: Self) {
        if other.len() > self.len() {
            self.resize(other.len(), 0);
        }
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

impl<A: Accumulator, B: Accumulator> Accumulator for (A, B) {
    fn merge(&mut self, other: Self) {
        self.0.merge(other.0);
        self.1.merge(other.1);
    }
}

fn tag(replicate: u64, e: Error) -> Error {
    match e {
        Error::Kernel { .. } => e,
        other => Error::Kernel {
            replicate,
            msg: other.to_string(),
        },
    }
}

/// Folds `kernel` over replicates `0..reps`. Replicate `r` sees
/// `SeedSpec { master: cfg.seed, stream: r }`. The first failing replicate
/// (by index) aborts the run.
pub fn run_accumulate<A, I, K>(reps: u64, cfg: &EngineConfig, init: I, kernel: K) -> Result<A>
where
    A: Accumulator,
    I: Fn() -> A + Sync + Send,
    K: Fn(u64, SeedSpec, &mut A) -> Result<()> + Sync + Send,
{
    let block = cfg.block.max(1);
    let blocks = reps.div_ceil(block);
    let run_block = |b: u64| -> Result<A> {
        let mut acc = init();
        for r in b * block..((b + 1) * block).min(reps) {
            kernel(r, SeedSpec::new(cfg.seed, r), &mut acc).map_err(|e| tag(r, e))?;
        }
        Ok(acc)
    };
    let parts: Vec<Result<A>> = if cfg.workers == 1 {
        (0..blocks).map(run_block).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
        pool.install(|| (0..blocks).into_par_iter().map(run_block).collect())
    };
    let mut out = init();
    for p in parts {
        out.merge(p?);
    }
    Ok(out)
}

/// Scalar kernel: one value per replicate.
pub fn run_replicates<K>(reps: u64, cfg: &EngineConfig, kernel: K) -> Result<SummaryStats>
where
    K: Fn(u64, SeedSpec) -> Result<f64> + Sync + Send,
{
    run_accumulate(reps, cfg, SummaryStats::new, |r, seed, acc| {
        acc.push(kernel(r, seed)?);
        Ok(())
    })
}

/// Vector kernel: `width` values per replicate, summarized channel by channel.
pub fn run_replicates_vec<K>(reps: u64, width: usize, cfg: &EngineConfig, kernel: K) -> Result<Vec<SummaryStats>>
where
    K: Fn(u64, SeedSpec) -> Result<Vec<f64>> + Sync + Send,
{
    run_accumulate(
        reps,
        cfg,
        || vec![SummaryStats::new(); width],
        |r, seed, acc: &mut Vec<SummaryStats>| {
            let v = kernel(r, seed)?;
            if v.len() != width {
                return Err(Error::Kernel {
                    replicate: r,
                    msg: format!("kernel returned {} values, expected {width}", v.len()),
                });
            }
            for (s, x) in acc.iter_mut().zip(v) {
                s.push(x);
            }
            Ok(())
        },
    )
}

/// Adds one observation to a histogram, growing it as needed.
pub fn bump(hist: &mut Vec<u64>, at: usize) {
    if hist.len() <= at {
        hist.resize(at + 1, 0);
    }
    hist[at] += 1;
}
