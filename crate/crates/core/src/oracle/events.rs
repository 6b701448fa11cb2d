use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::{check_budget, enumeration_cost};
use crate::error::{invalid, Result};
use crate::lattice::{origin_neighbor_index, StepDistribution};

/// Finite-horizon events built from a forward walk and an independent dual
/// walk (negated increments), both started at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Event {
    /// `A_k`: the two `k`-prefixes together miss some neighbor of the origin,
    /// and the forward walk does not return by time `k`.
    A,
    /// `A_k`, and the dual walk does not return by time `k` either.
    ATwoSided,
    /// The forward walk does not return to the origin by time `k`.
    NoReturn,
}

/// Path counts keyed by (covered-neighbor mask, returned to origin).
type Profile = BTreeMap<(u64, bool), BigUint>;

fn profile(dist: &StepDistribution, k: usize, sign: i64) -> Profile {
    fn walk(
        dist: &StepDistribution,
        sign: i64,
        left: usize,
        pos: &mut Vec<i64>,
        mask: u64,
        returned: bool,
        out: &mut Profile,
    ) {
        if left == 0 {
            *out.entry((mask, returned)).or_default() += 1u32;
            return;
        }
        for a in 0..dist.len() {
            for (p, x) in pos.iter_mut().zip(dist.atom(a)) {
                *p += sign * x;
            }
            let m = match origin_neighbor_index(pos) {
                Some(i) => mask | 1 << i,
                None => mask,
            };
            let r = returned || pos.iter().all(|&c| c == 0);
            walk(dist, sign, left - 1, pos, m, r, out);
            for (p, x) in pos.iter_mut().zip(dist.atom(a)) {
                *p -= sign * x;
            }
        }
    }
    let mut out = Profile::new();
    walk(dist, sign, k, &mut vec![0; dist.dim()], 0, false, &mut out);
    out
}

fn check(dist: &StepDistribution, k: usize, budget: u128) -> Result<()> {
    if !dist.is_uniform() {
        return invalid("exact event probabilities need a uniform step law");
    }
    check_budget("event enumeration", 2 * enumeration_cost(dist.len(), k), budget)
}

fn probability_from(dist: &StepDistribution, k: usize, event: Event) -> BigRational {
    let s = BigUint::from(dist.len());
    let forward = profile(dist, k, 1);
    let full = (1u64 << (2 * dist.dim())) - 1;
    let count = match event {
        Event::NoReturn => {
            let c: BigUint = forward.iter().filter(|((_, r), _)| !r).map(|(_, c)| c.clone()).sum();
            return BigRational::new(BigInt::from(c), BigInt::from(s.pow(k as u32)));
        }
        Event::A | Event::ATwoSided => {
            let dual = profile(dist, k, -1);
            let mut total = BigUint::from(0u8);
            for (&(mf, rf), cf) in &forward {
                if rf {
                    continue;
                }
                for (&(md, rd), cd) in &dual {
                    if mf | md == full || (event == Event::ATwoSided && rd) {
                        continue;
                    }
                    total += cf * cd;
                }
            }
            total
        }
    };
    BigRational::new(BigInt::from(count), BigInt::from(s.pow(2 * k as u32)))
}

/// Exact probability of `event` at horizon `k` for a uniform step law.
///
/// Each side is enumerated once and summarized by which neighbors of the
/// origin it covers and whether it returns, so the work is `2 (s + ... + s^k)`
/// path-steps rather than `s^(2k)`.
pub fn exact_event_probability(dist: &StepDistribution, event: Event, k: usize, budget: u128) -> Result<BigRational> {
    check(dist, k, budget)?;
    Ok(probability_from(dist, k, event))
}

/// [`exact_event_probability`] for every horizon `0..=k_max`.
pub fn exact_event_probabilities(
    dist: &StepDistribution,
    event: Event,
    k_max: usize,
    budget: u128,
) -> Result<Vec<BigRational>> {
    let total: u128 = (0..=k_max).map(|k| 2 * enumeration_cost(dist.len(), k)).sum();
    check_budget("event enumeration", total, budget)?;
    (0..=k_max).map(|k| exact_event_probability(dist, event, k, budget)).collect()
}
