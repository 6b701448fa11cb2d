use num_bigint::BigUint;
use num_rational::BigRational;

use super::{exact_distributions_by_depth, ExactPMF, Statistic};
use crate::error::Result;
use crate::lattice::StepDistribution;

/// One compared pair of tails: `P(L_{n+v} >= y_shifted)` against `P(L_n >= y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailComparison {
    pub n: usize,
    pub v: usize,
    pub y: i64,
    pub shifted_y: i64,
    pub later: BigRational,
    pub earlier: BigRational,
}

/// Outcome of [`note2_check`].
#[derive(Clone, Debug, Default)]
pub struct Note2Report {
    /// Cases where `P(L_{n+v} >= y - 2dv) < P(L_n >= y)`; must stay empty.
    pub violations: Vec<TailComparison>,
    /// Cases where plain monotonicity `P(L_{n+v} >= y) >= P(L_n >= y)` fails.
    pub monotonicity_witnesses: Vec<TailComparison>,
    /// Number of `(n, v, y)` triples examined.
    pub checked: usize,
}

fn compare(pmfs: &[ExactPMF], n: usize, v: usize, y: i64, shifted_y: i64) -> Option<TailComparison> {
    let (early, late) = (&pmfs[n], &pmfs[n + v]);
    // Cross-multiply so both sides share the denominator s^(n+v).
    let lhs = late.tail_count(shifted_y);
    let rhs = early.tail_count(y) * (&late.normalizer / &early.normalizer);
    if lhs >= rhs {
        return None;
    }
    Some(TailComparison {
        n,
        v,
        y,
        shifted_y,
        later: late.tail(shifted_y),
        earlier: early.tail(y),
    })
}

/// Checks `P(L_{n+v} >= y - 2dv) >= P(L_n >= y)` exactly for every
/// `n <= n_max`, `v <= v_max` and every threshold `y` where either tail can
/// change, and collects witnesses against plain monotonicity in `n`.
pub fn note2_check(dist: &StepDistribution, n_max: usize, v_max: usize, budget: u128) -> Result<Note2Report> {
    let pmfs = exact_distributions_by_depth(dist, n_max + v_max, &Statistic::Boundary, budget)?;
    debug_assert!(pmfs.iter().all(|p| p.normalizer == BigUint::from(dist.len()).pow(p.n as u32)));
    let slack = 2 * dist.dim() as i64;
    let mut report = Note2Report::default();
    for n in 0..=n_max {
        for v in 0..=v_max {
            // L_m <= m + 1, so thresholds beyond n + v + 2 give empty tails on both sides.
            for y in 0..=(n + v) as i64 + 2 {
                report.checked += 1;
                if let Some(c) = compare(&pmfs, n, v, y, y - slack * v as i64) {
                    report.violations.push(c);
                }
                if v > 0 {
                    if let Some(c) = compare(&pmfs, n, v, y, y) {
                        report.monotonicity_witnesses.push(c);
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimension_has_no_violations() {
        let r = note2_check(&StepDistribution::simple(1), 10, 3, 1_000_000).unwrap();
        assert!(r.violations.is_empty());
        assert!(r.checked > 0);
    }

    #[test]
    fn small_planar_check() {
        let r = note2_check(&StepDistribution::simple(2), 4, 2, 1_000_000).unwrap();
        assert!(r.violations.is_empty());
    }

    #[test]
    fn witnesses_are_genuine() {
        let r = note2_check(&StepDistribution::simple(2), 7, 3, 100_000_000).unwrap();
        for w in &r.monotonicity_witnesses {
            assert!(w.later < w.earlier);
        }
    }
}
