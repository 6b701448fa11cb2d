use super::{Accumulator, SummaryStats};

/// Event times of replicates whose event happened by the cap; the remaining
/// replicates are censored at the cap.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EventTimes {
    pub times: Vec<u64>,
    pub total: u64,
}

impl EventTimes {
    pub fn record(&mut self, time: Option<u64>) {
        self.total += 1;
        if let Some(t) = time {
            self.times.push(t);
        }
    }
}

impl Accumulator for EventTimes {
    fn merge(&mut self, other: Self) {
        self.times.extend(other.times);
        self.total += other.total;
    }
}

/// Empirical survival function `P(T > k)` for `k <= cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct SurvivalCurve {
    sorted: Vec<u64>,
    pub total: u64,
    pub cap: u64,
}

impl SurvivalCurve {
    pub fn new(events: EventTimes, cap: u64) -> Self {
        let mut sorted = events.times;
        sorted.sort_unstable();
        SurvivalCurve {
            sorted,
            total: events.total,
            cap,
        }
    }

    /// Replicates with `T > k`.
    pub fn survivors(&self, k: u64) -> u64 {
        assert!(k <= self.cap, "horizon {k} beyond cap {}", self.cap);
        self.total - self.sorted.partition_point(|&t| t <= k) as u64
    }

    pub fn survival(&self, k: u64) -> f64 {
        self.survivors(k) as f64 / self.total as f64
    }

    pub fn summary(&self, k: u64) -> SummaryStats {
        SummaryStats::from_bernoulli(self.survivors(k), self.total)
    }

    /// `P(T > k)` for every `k` in `0..=n`.
    pub fn dense(&self, n: u64) -> Vec<f64> {
        let mut out = Vec::with_capacity(n as usize + 1);
        let mut idx = 0;
        let mut alive = self.total;
        for k in 0..=n {
            while idx < self.sorted.len() && self.sorted[idx] <= k {
                alive -= 1;
                idx += 1;
            }
            out.push(alive as f64 / self.total as f64);
        }
        out
    }
}
