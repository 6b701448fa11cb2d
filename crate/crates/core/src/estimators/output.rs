use serde::{Deserialize, Serialize};

use super::{BracketEstimate, SummaryStats};

/// One CSV row per experiment and parameter point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub name: String,
    pub d: usize,
    pub n_or_k: u64,
    pub reps: u64,
    pub mean: f64,
    pub stderr: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// JSON metadata.
    pub extra: String,
}

impl CsvRow {
    pub fn from_summary(name: impl Into<String>, d: usize, n_or_k: u64, s: &SummaryStats, extra: serde_json::Value) -> Self {
        let (ci_lo, ci_hi) = s.ci();
        CsvRow {
            name: name.into(),
            d,
            n_or_k,
            reps: s.count,
            mean: s.mean,
            stderr: s.stderr(),
            ci_lo,
            ci_hi,
            extra: extra.to_string(),
        }
    }

    /// A row for a value with no sampling error (exact or deterministic).
    pub fn exact(name: impl Into<String>, d: usize, n_or_k: u64, value: f64, extra: serde_json::Value) -> Self {
        CsvRow {
            name: name.into(),
            d,
            n_or_k,
            reps: 0,
            mean: value,
            stderr: 0.0,
            ci_lo: value,
            ci_hi: value,
            extra: extra.to_string(),
        }
    }

    /// Rows for the members of a bracket, suffixed `:lower` and `:upper`.
    pub fn from_bracket(b: &BracketEstimate, d: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for (tag, member) in [("lower", &b.lower), ("upper", &b.upper)] {
            if let Some(s) = member {
                let mut meta = b.meta.clone();
                meta["direction"] = serde_json::to_value(b.direction).unwrap_or_default();
                out.push(Self::from_summary(format!("{}:{tag}", b.name), d, b.truncation, s, meta));
            }
        }
        out
    }
}
