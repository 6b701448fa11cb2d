use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::json;

/// Exact law of an integer statistic over all `s^n` equally likely paths.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPMF {
    pub statistic: String,
    pub n: usize,
    pub support_size: usize,
    /// Path counts per statistic value.
    pub weights: BTreeMap<u64, u64>,
    /// `support_size^n`.
    pub normalizer: BigUint,
}

impl ExactPMF {
    pub fn new(
        statistic: String,
        n: usize,
        support_size: usize,
        weights: BTreeMap<u64, u64>,
        normalizer: BigUint,
    ) -> Self {
        let pmf = ExactPMF {
            statistic,
            n,
            support_size,
            weights,
            normalizer,
        };
        debug_assert_eq!(pmf.total(), pmf.normalizer);
        pmf
    }

    /// Sum of weights; equals the normalizer.
    pub fn total(&self) -> BigUint {
        self.weights.values().map(|&c| BigUint::from(c)).sum()
    }

    fn ratio(&self, count: BigUint) -> BigRational {
        BigRational::new(BigInt::from(count), BigInt::from(self.normalizer.clone()))
    }

    pub fn count(&self, value: u64) -> u64 {
        self.weights.get(&value).copied().unwrap_or(0)
    }

    pub fn probability(&self, value: u64) -> BigRational {
        self.ratio(BigUint::from(self.count(value)))
    }

    /// Number of paths with statistic `>= y`; every path counts for `y <= 0`.
    pub fn tail_count(&self, y: i64) -> BigUint {
        if y <= 0 {
            return self.normalizer.clone();
        }
        self.weights
            .range(y as u64..)
            .map(|(_, &c)| BigUint::from(c))
            .sum()
    }

    /// `P(stat >= y)`.
    pub fn tail(&self, y: i64) -> BigRational {
        self.ratio(self.tail_count(y))
    }

    pub fn mean(&self) -> BigRational {
        let s: BigUint = self
            .weights
            .iter()
            .map(|(&v, &c)| BigUint::from(v) * BigUint::from(c))
            .sum();
        self.ratio(s)
    }

    /// CSV with header `value,count,numerator,denominator` (reduced fractions).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("value,count,numerator,denominator\n");
        for (&v, &c) in &self.weights {
            let p = self.probability(v);
            let _ = writeln!(out, "{v},{c},{},{}", p.numer(), p.denom());
        }
        out
    }

    pub fn summary_json(&self) -> serde_json::Value {
        let mean = self.mean();
        json!({
            "statistic": self.statistic,
            "n": self.n,
            "support_size": self.support_size,
            "normalizer": self.normalizer.to_string(),
            "mean": {
                "numerator": mean.numer().to_string(),
                "denominator": mean.denom().to_string(),
                "value": mean.to_f64(),
            },
            "values": self.weights.len(),
            "normalized": self.total() == self.normalizer && !self.normalizer.is_zero(),
        })
    }
}
