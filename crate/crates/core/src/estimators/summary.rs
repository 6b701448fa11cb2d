use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Default two-sided confidence level for reported intervals.
pub const DEFAULT_LEVEL: f64 = 0.99;

/// Running mean and variance of replicate values, mergeable in any grouping.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub count: u64,
    pub mean: f64,
    /// Sum of squared deviations from the mean.
    pub m2: f64,
    pub level: f64,
}

impl Default for SummaryStats {
    fn default() -> Self {
        SummaryStats {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            level: DEFAULT_LEVEL,
        }
    }
}

impl SummaryStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(values: impl IntoIterator<Item = f64>) -> Self {
        let mut s = Self::new();
        for v in values {
            s.push(v);
        }
        s
    }

    /// Exact summary of `successes` ones among `count` zero/one values.
    pub fn from_bernoulli(successes: u64, count: u64) -> Self {
        if count == 0 {
            return Self::new();
        }
        let p = successes as f64 / count as f64;
        SummaryStats {
            count,
            mean: p,
            m2: successes as f64 * (1.0 - p) * (1.0 - p) + (count - successes) as f64 * p * p,
            level: DEFAULT_LEVEL,
        }
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.level = level;
        self
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. pairwise combination.
    pub fn merge(&mut self, other: &SummaryStats) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            let level = self.level;
            *self = *other;
            self.level = level;
            return;
        }
        let n = (self.count + other.count) as f64;
        let (na, nb) = (self.count as f64, other.count as f64);
        let delta = other.mean - self.mean;
        self.mean += delta * nb / n;
        self.m2 += other.m2 + delta * delta * na * nb / n;
        self.count += other.count;
    }

    /// Unbiased sample variance; zero below two samples.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }

    /// Normal-approximation interval at [`SummaryStats::level`].
    pub fn ci(&self) -> (f64, f64) {
        let z = normal_quantile(0.5 + self.level / 2.0);
        let h = z * self.stderr();
        (self.mean - h, self.mean + h)
    }

    /// The same summary with every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        SummaryStats {
            count: self.count,
            mean: self.mean * c,
            m2: self.m2 * c * c,
            level: self.level,
        }
    }
}

pub(crate) fn normal_quantile(p: f64) -> f64 {
    Normal::standard().inverse_cdf(p)
}

/// `sqrt(se_a^2 + se_b^2)`.
pub fn combined_stderr(a: &SummaryStats, b: &SummaryStats) -> f64 {
    a.stderr().hypot(b.stderr())
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, count: u64, z: f64) -> (f64, f64) {
    if count == 0 {
        return (0.0, 1.0);
    }
    let n = count as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == count { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// On which side of the target a truncated member sits in expectation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Decreasing events: the member overestimates.
    Above,
    /// Increasing events: the member underestimates.
    Below,
    /// Truncations pull both ways.
    Mixed,
}

/// Lower and upper approximants of an infinite-horizon constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketEstimate {
    pub name: String,
    /// Truncation horizon `k` (or cap `M`).
    pub truncation: u64,
    pub lower: Option<SummaryStats>,
    pub upper: Option<SummaryStats>,
    /// Side of the target for the primary member.
    pub direction: Direction,
    /// Free-form metadata (cap rates, companion horizons).
    pub meta: serde_json::Value,
}

impl BracketEstimate {
    pub fn width(&self) -> Option<f64> {
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) => Some(u.mean - l.mean),
            _ => None,
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.width().map_or(true, |w| w >= 0.0)
    }
}
