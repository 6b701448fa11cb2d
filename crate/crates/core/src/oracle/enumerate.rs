use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;

use super::{check_budget, enumeration_cost, ExactPMF};
use crate::error::{invalid, Result};
use crate::lattice::StepDistribution;
use crate::tracker::{pattern_count_state, PatternSpec, RangeState};

/// Which per-path statistic an exact distribution is taken of.
#[derive(Clone, Debug)]
pub enum Statistic {
    /// `L_n`
    Boundary,
    /// `R_n`
    Range,
    /// `Q_n^(p)`, sites visited exactly `p` times.
    Q(usize),
    /// `J_n^(p)`
    JExact(usize),
    /// `J_n^p`
    JAtLeast(usize),
    /// `L'_n` for a pattern specification.
    Pattern(PatternSpec),
}

impl Statistic {
    pub fn name(&self) -> String {
        match self {
            Statistic::Boundary => "L".into(),
            Statistic::Range => "R".into(),
            Statistic::Q(p) => format!("Q({p})"),
            Statistic::JExact(p) => format!("J_exact({p})"),
            Statistic::JAtLeast(p) => format!("J_atleast({p})"),
            Statistic::Pattern(_) => "pattern".into(),
        }
    }

    pub fn evaluate(&self, state: &RangeState) -> u64 {
        match self {
            Statistic::Boundary => state.boundary_len(),
            Statistic::Range => state.range(),
            // p + 1 buckets keep multiplicity p unpooled.
            Statistic::Q(p) => state.snapshot(p + 1).q(*p),
            Statistic::JExact(p) => state.snapshot(p + 1).j_exact(*p),
            Statistic::JAtLeast(p) => state.snapshot(*p).j_atleast(*p),
            Statistic::Pattern(spec) => pattern_count_state(state, spec),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Statistic::Q(0) | Statistic::JExact(0) | Statistic::JAtLeast(0) => {
                invalid("multiplicity p must be at least 1")
            }
            _ => Ok(()),
        }
    }
}

/// A node of the depth-first enumeration tree: a path prefix and its tracker.
pub struct PathNode<'a> {
    /// Atom indices of the prefix; its length is the depth.
    pub atoms: &'a [usize],
    pub state: &'a RangeState,
}

impl PathNode<'_> {
    pub fn depth(&self) -> usize {
        self.atoms.len()
    }
}

fn require_uniform(dist: &StepDistribution) -> Result<()> {
    if !dist.is_uniform() {
        return invalid("exact enumeration needs a uniform step law");
    }
    Ok(())
}

fn descend<A>(
    dist: &StepDistribution,
    max_depth: usize,
    atoms: &mut Vec<usize>,
    state: &mut RangeState,
    acc: &mut A,
    visit: &(impl Fn(&mut A, &PathNode) + Sync),
) {
    visit(acc, &PathNode { atoms, state });
    if atoms.len() == max_depth {
        return;
    }
    for a in 0..dist.len() {
        let rec = state.push_step(dist.atom(a));
        atoms.push(a);
        descend(dist, max_depth, atoms, state, acc, visit);
        atoms.pop();
        state.undo_step(&rec);
    }
}

/// Visits every path of length `0..=max_depth` of a uniform walk from the
/// origin, depth first, with the tracker updated and undone in place.
///
/// Subtrees below each first step are folded independently (in parallel) and
/// merged in atom order, so the result does not depend on scheduling.
pub fn fold_paths<A, I, V, M>(
    dist: &StepDistribution,
    max_depth: usize,
    budget: u128,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &PathNode) + Sync,
    M: Fn(A, A) -> A,
{
    require_uniform(dist)?;
    check_budget(
        "path enumeration",
        enumeration_cost(dist.len(), max_depth),
        budget,
    )?;
    let d = dist.dim();
    let mut root = init();
    let state = RangeState::new(d);
    visit(&mut root, &PathNode { atoms: &[], state: &state });
    if max_depth == 0 {
        return Ok(root);
    }
    let parts: Vec<A> = (0..dist.len())
        .into_par_iter()
        .map(|a| {
            let mut acc = init();
            let mut state = RangeState::new(d);
            let mut atoms = vec![a];
            state.push_step(dist.atom(a));
            descend(dist, max_depth, &mut atoms, &mut state, &mut acc, &visit);
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(root, merge))
}

/// Exact laws of `stat` for every path length `0..=n_max` from one enumeration.
pub fn exact_distributions_by_depth(
    dist: &StepDistribution,
    n_max: usize,
    stat: &Statistic,
    budget: u128,
) -> Result<Vec<ExactPMF>> {
    stat.validate()?;
    type Counts = Vec<BTreeMap<u64, u64>>;
    let counts: Counts = fold_paths(
        dist,
        n_max,
        budget,
        || vec![BTreeMap::new(); n_max + 1],
        |acc: &mut Counts, node| {
            *acc[node.depth()].entry(stat.evaluate(node.state)).or_insert(0) += 1;
        },
        |mut a, b| {
            for (da, db) in a.iter_mut().zip(b) {
                for (v, c) in db {
                    *da.entry(v).or_insert(0) += c;
                }
            }
            a
        },
    )?;
    let s = BigUint::from(dist.len());
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(n, weights)| ExactPMF::new(stat.name(), n, dist.len(), weights, s.pow(n as u32)))
        .collect())
}

/// Exact law of `stat` after `n` steps, by depth-first enumeration.
pub fn exact_distribution(
    dist: &StepDistribution,
    n: usize,
    stat: &Statistic,
    budget: u128,
) -> Result<ExactPMF> {
    Ok(exact_distributions_by_depth(dist, n, stat, budget)?
        .pop()
        .expect("at least depth 0"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_ENUMERATION_BUDGET;
    use num_rational::BigRational;
    use num_traits::One;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn one_dimension_two_steps() {
        let pmf = exact_distribution(
            &StepDistribution::simple(1),
            2,
            &Statistic::Boundary,
            DEFAULT_ENUMERATION_BUDGET,
        )
        .unwrap();
        assert!(pmf.probability(2).is_one());
        let r = exact_distribution(
            &StepDistribution::simple(1),
            2,
            &Statistic::Range,
            DEFAULT_ENUMERATION_BUDGET,
        )
        .unwrap();
        assert_eq!(r.probability(2), rat(1, 2));
        assert_eq!(r.probability(3), rat(1, 2));
        assert_eq!(r.mean(), rat(5, 2));
    }

    #[test]
    fn two_dimensions_one_step() {
        let pmf = exact_distribution(
            &StepDistribution::simple(2),
            1,
            &Statistic::Boundary,
            DEFAULT_ENUMERATION_BUDGET,
        )
        .unwrap();
        assert!(pmf.probability(2).is_one());
    }

    #[test]
    fn depth_zero() {
        let pmf = exact_distribution(
            &StepDistribution::simple(3),
            0,
            &Statistic::Boundary,
            DEFAULT_ENUMERATION_BUDGET,
        )
        .unwrap();
        assert!(pmf.probability(1).is_one());
    }

    #[test]
    fn refuses_over_budget() {
        let err = exact_distribution(&StepDistribution::simple(2), 14, &Statistic::Boundary, 100_000_000)
            .unwrap_err();
        assert!(matches!(err, crate::Error::Budget { .. }));
    }

    #[test]
    fn refuses_non_uniform() {
        let dist = StepDistribution::parse("1 1/3\n-1 2/3\n").unwrap();
        assert!(exact_distribution(&dist, 2, &Statistic::Boundary, 1000).is_err());
    }

    #[test]
    fn multiplicity_statistics_two_steps_planar() {
        // 4 of 16 two-step paths return to the origin: Q(2)=1 there.
        let q2 = exact_distribution(&StepDistribution::simple(2), 2, &Statistic::Q(2), 1000).unwrap();
        assert_eq!(q2.probability(1), rat(1, 4));
        let j2 = exact_distribution(&StepDistribution::simple(2), 2, &Statistic::JExact(2), 1000).unwrap();
        assert_eq!(j2.probability(1), rat(1, 4));
        let ja1 = exact_distribution(&StepDistribution::simple(2), 2, &Statistic::JAtLeast(1), 1000).unwrap();
        assert_eq!(ja1.mean(), rat(4 * 2 + 12 * 3, 16));
        assert!(exact_distribution(&StepDistribution::simple(2), 2, &Statistic::Q(0), 1000).is_err());
    }
}
