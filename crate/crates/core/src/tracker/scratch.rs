use std::collections::HashMap;

use super::RangeStats;
use crate::lattice::{neighbors, LatticePoint, WalkPath};

/// Evaluates the range statistics of `path` directly from their definitions:
/// count visits per site, then test each visited site's neighborhood.
pub fn recompute_from_scratch(path: &WalkPath, p_max: usize) -> RangeStats {
    let mut visits: HashMap<LatticePoint, u64> = HashMap::new();
    for pos in path.positions() {
        *visits.entry(pos).or_insert(0) += 1;
    }
    let max_mult = visits.values().copied().max().unwrap_or(0) as usize;
    let mut range_hist = vec![0u64; max_mult + 1];
    let mut boundary_hist = vec![0u64; max_mult + 1];
    let mut boundary = 0;
    for (site, &m) in &visits {
        range_hist[m as usize] += 1;
        if neighbors(site).iter().any(|nb| !visits.contains_key(nb)) {
            boundary += 1;
            boundary_hist[m as usize] += 1;
        }
    }
    RangeStats::from_histograms(
        path.len() as u64,
        visits.len() as u64,
        boundary,
        &range_hist,
        &boundary_hist,
        p_max,
    )
}
