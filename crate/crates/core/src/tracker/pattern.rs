use std::collections::{BTreeSet, HashSet};

use super::RangeState;
use crate::error::{invalid, Result};
use crate::lattice::{LatticePoint, WalkPath};

/// A window `H` of offsets and the admissible window contents `H~_j`.
///
/// A visited site `a` matches when `{h in H : a + h visited}` equals some
/// `H~_j`. Windows hold at most 64 offsets.
#[derive(Clone, Debug)]
pub struct PatternSpec {
    window: Vec<LatticePoint>,
    masks: HashSet<u64>,
    patterns: Vec<BTreeSet<LatticePoint>>,
}

impl PatternSpec {
    pub fn new(window: Vec<LatticePoint>, patterns: Vec<BTreeSet<LatticePoint>>) -> Result<Self> {
        let window: Vec<LatticePoint> = window.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if window.is_empty() {
            return invalid("pattern window is empty");
        }
        if window.len() > 64 {
            return invalid("pattern window holds more than 64 offsets");
        }
        let d = window[0].dim();
        if window.iter().any(|h| h.dim() != d) {
            return invalid("pattern window mixes dimensions");
        }
        let zero = LatticePoint::origin(d);
        let zero_in_window = window.contains(&zero);
        let mut masks = HashSet::new();
        for (j, pat) in patterns.iter().enumerate() {
            let mut mask = 0u64;
            for h in pat {
                let Some(i) = window.iter().position(|w| w == h) else {
                    return invalid(format!("pattern {j} contains {h}, which is not in the window"));
                };
                mask |= 1 << i;
            }
            if zero_in_window && !pat.contains(&zero) {
                log::warn!("pattern {j} omits the zero offset and can never match at a visited site");
            }
            masks.insert(mask);
        }
        Ok(PatternSpec {
            window,
            masks,
            patterns,
        })
    }

    /// The window `{0} ∪ N(0)` with every pattern that keeps 0 and misses at
    /// least one neighbor: its matches are exactly the inner-boundary sites.
    pub fn inner_boundary(d: usize) -> Self {
        let zero = LatticePoint::origin(d);
        let nbrs = crate::lattice::neighbors(&zero);
        let mut window = vec![zero.clone()];
        window.extend(nbrs.iter().cloned());
        let full = (1u32 << nbrs.len()) - 1;
        let patterns = (0..full)
            .map(|bits| {
                let mut s: BTreeSet<LatticePoint> = nbrs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits & (1 << i) != 0)
                    .map(|(_, p)| p.clone())
                    .collect();
                s.insert(zero.clone());
                s
            })
            .collect();
        Self::new(window, patterns).expect("well formed")
    }

    /// The window `{0} ∪ N(0)` with the single full pattern: interior sites.
    pub fn interior(d: usize) -> Self {
        let zero = LatticePoint::origin(d);
        let mut window = vec![zero.clone()];
        window.extend(crate::lattice::neighbors(&zero));
        let all: BTreeSet<LatticePoint> = window.iter().cloned().collect();
        Self::new(window, vec![all]).expect("well formed")
    }

    pub fn window(&self) -> &[LatticePoint] {
        &self.window
    }

    pub fn patterns(&self) -> &[BTreeSet<LatticePoint>] {
        &self.patterns
    }

    fn matches(&self, anchor: &LatticePoint, visited: impl Fn(&LatticePoint) -> bool) -> bool {
        let mut mask = 0u64;
        for (i, h) in self.window.iter().enumerate() {
            if visited(&(anchor + h)) {
                mask |= 1 << i;
            }
        }
        self.masks.contains(&mask)
    }
}

/// `L'_n`: distinct visited sites whose window contents match some pattern.
pub fn pattern_count(path: &WalkPath, spec: &PatternSpec) -> u64 {
    let visited: HashSet<LatticePoint> = path.positions().into_iter().collect();
    visited
        .iter()
        .filter(|a| spec.matches(a, |p| visited.contains(p)))
        .count() as u64
}

/// Same count, evaluated on the sites held by a tracker.
pub fn pattern_count_state(state: &RangeState, spec: &PatternSpec) -> u64 {
    state
        .visited()
        .iter()
        .filter(|a| spec.matches(a, |p| state.is_visited(p)))
        .count() as u64
}
