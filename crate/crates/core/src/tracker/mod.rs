//! Streaming range statistics of a single path.
//!
//! [`RangeState`] keeps, for every visited site, its visit count (time
//! indices `0..=n` included) and how many of its `2d` neighbors are visited.
//! A site is on the inner boundary while that neighbor count is below `2d`.
//! Each step touches at most `2d` other sites, and histograms of
//! multiplicities over the range and over the boundary are kept current, so
//! a snapshot costs `O(max multiplicity)`.

mod keys;
mod pattern;
mod scratch;
mod stats;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::lattice::LatticePoint;
use keys::{PackedKey, SiteKey, VectorKey};

pub use pattern::{pattern_count, pattern_count_state, PatternSpec};
pub use scratch::recompute_from_scratch;
pub use stats::{RangeStats, DEFAULT_P_MAX};

#[derive(Clone, Copy, Debug)]
struct Site {
    visits: u32,
    covered: u16,
}

#[derive(Clone, Debug)]
struct SiteTable<K: SiteKey> {
    sites: FxHashMap<K, Site>,
    full: u16,
    boundary: u64,
    range_hist: Vec<u64>,
    boundary_hist: Vec<u64>,
}

#[inline(always)]
fn bump(hist: &mut Vec<u64>, idx: usize) {
    if idx >= hist.len() {
        hist.resize(idx + 1, 0);
    }
    hist[idx] += 1;
}

impl<K: SiteKey> SiteTable<K> {
    fn new(d: usize) -> Self {
        SiteTable {
            sites: FxHashMap::default(),
            full: (2 * d) as u16,
            boundary: 0,
            range_hist: vec![0; 2],
            boundary_hist: vec![0; 2],
        }
    }

    /// Records a visit to `key`; returns whether the site is new.
    #[inline]
    fn visit(&mut self, key: K, coords: &[i64]) -> bool {
        if let Some(site) = self.sites.get_mut(&key) {
            let old = site.visits as usize;
            site.visits += 1;
            self.range_hist[old] -= 1;
            bump(&mut self.range_hist, old + 1);
            if site.covered < self.full {
                self.boundary_hist[old] -= 1;
                bump(&mut self.boundary_hist, old + 1);
            }
            return false;
        }
        let mut covered = 0u16;
        for axis in 0..coords.len() {
            for sign in [-1, 1] {
                let nk = key.neighbor(coords, axis, sign);
                if let Some(nb) = self.sites.get_mut(&nk) {
                    nb.covered += 1;
                    covered += 1;
                    if nb.covered == self.full {
                        self.boundary -= 1;
                        self.boundary_hist[nb.visits as usize] -= 1;
                    }
                }
            }
        }
        self.sites.insert(key, Site { visits: 1, covered });
        self.range_hist[1] += 1;
        if covered < self.full {
            self.boundary += 1;
            self.boundary_hist[1] += 1;
        }
        true
    }

    /// Reverts the most recent visit to `key`.
    fn unvisit(&mut self, key: K, coords: &[i64], was_new: bool) {
        if !was_new {
            let site = self.sites.get_mut(&key).expect("undo of unvisited site");
            let old = site.visits as usize;
            site.visits -= 1;
            self.range_hist[old] -= 1;
            self.range_hist[old - 1] += 1;
            if site.covered < self.full {
                self.boundary_hist[old] -= 1;
                self.boundary_hist[old - 1] += 1;
            }
            return;
        }
        let site = self.sites.remove(&key).expect("undo of unvisited site");
        debug_assert_eq!(site.visits, 1);
        self.range_hist[1] -= 1;
        if site.covered < self.full {
            self.boundary -= 1;
            self.boundary_hist[1] -= 1;
        }
        for axis in 0..coords.len() {
            for sign in [-1, 1] {
                let nk = key.neighbor(coords, axis, sign);
                if let Some(nb) = self.sites.get_mut(&nk) {
                    if nb.covered == self.full {
                        self.boundary += 1;
                        self.boundary_hist[nb.visits as usize] += 1;
                    }
                    nb.covered -= 1;
                }
            }
        }
    }

    fn get(&self, coords: &[i64]) -> Option<&Site> {
        K::encode(coords).and_then(|k| self.sites.get(&k))
    }

    fn recode<K2: SiteKey>(&self, d: usize) -> SiteTable<K2> {
        let sites = self
            .sites
            .iter()
            .map(|(k, s)| {
                let p = k.decode(d);
                (K2::encode(p.coords()).expect("target scheme is total"), *s)
            })
            .collect();
        SiteTable {
            sites,
            full: self.full,
            boundary: self.boundary,
            range_hist: self.range_hist.clone(),
            boundary_hist: self.boundary_hist.clone(),
        }
    }
}

#[derive(Clone, Debug)]
enum Table {
    Packed(SiteTable<PackedKey>),
    Vector(SiteTable<VectorKey>),
}

/// Undo information for one [`RangeState::push_step`].
#[derive(Clone, Debug)]
pub struct StepRecord {
    increment: SmallVec<[i64; 4]>,
    new_site: bool,
}

impl StepRecord {
    pub fn new_site(&self) -> bool {
        self.new_site
    }
}

/// Visited set, inner boundary and visit multiplicities of a growing path.
#[derive(Clone, Debug)]
pub struct RangeState {
    position: LatticePoint,
    steps: u64,
    table: Table,
}

impl RangeState {
    /// Fresh state for a walk started at the origin of `Z^d`.
    pub fn new(d: usize) -> Self {
        Self::starting_at(LatticePoint::origin(d))
    }

    pub fn starting_at(start: LatticePoint) -> Self {
        let d = start.dim();
        assert!(d >= 1, "dimension must be at least 1");
        let mut state = RangeState {
            position: start,
            steps: 0,
            table: if d <= 3 {
                Table::Packed(SiteTable::new(d))
            } else {
                Table::Vector(SiteTable::new(d))
            },
        };
        state.visit_current();
        state
    }

    #[inline]
    fn visit_current(&mut self) -> bool {
        let coords = self.position.coords();
        if let Table::Packed(t) = &mut self.table {
            if let Some(k) = PackedKey::encode(coords) {
                return t.visit(k, coords);
            }
            // Out of packing range: migrate once to vector keys.
            self.table = Table::Vector(t.recode(coords.len()));
        }
        match &mut self.table {
            Table::Vector(t) => t.visit(VectorKey::encode(coords).expect("total"), coords),
            Table::Packed(_) => unreachable!(),
        }
    }

    pub fn dim(&self) -> usize {
        self.position.dim()
    }

    /// Advances by `increment` and updates every statistic.
    #[inline]
    pub fn push_step(&mut self, increment: &[i64]) -> StepRecord {
        self.position.add_assign_slice(increment);
        self.steps += 1;
        let new_site = self.visit_current();
        StepRecord {
            increment: SmallVec::from_slice(increment),
            new_site,
        }
    }

    /// Reverts the most recent step. Records must be undone in reverse order.
    pub fn undo_step(&mut self, record: &StepRecord) {
        let coords = self.position.coords();
        match &mut self.table {
            Table::Packed(t) => {
                let k = PackedKey::encode(coords).expect("position was packed when visited");
                t.unvisit(k, coords, record.new_site);
            }
            Table::Vector(t) => {
                t.unvisit(VectorKey::encode(coords).expect("total"), coords, record.new_site)
            }
        }
        for (c, i) in self.position.coords_mut().iter_mut().zip(&record.increment) {
            *c -= i;
        }
        self.steps -= 1;
    }

    /// Number of steps consumed.
    pub fn n(&self) -> u64 {
        self.steps
    }

    pub fn position(&self) -> &LatticePoint {
        &self.position
    }

    /// `R_n`, the number of distinct visited sites.
    pub fn range(&self) -> u64 {
        match &self.table {
            Table::Packed(t) => t.sites.len() as u64,
            Table::Vector(t) => t.sites.len() as u64,
        }
    }

    /// `L_n`, the size of the inner boundary.
    pub fn boundary_len(&self) -> u64 {
        match &self.table {
            Table::Packed(t) => t.boundary,
            Table::Vector(t) => t.boundary,
        }
    }

    fn site(&self, p: &LatticePoint) -> Option<Site> {
        if p.dim() != self.dim() {
            return None;
        }
        match &self.table {
            Table::Packed(t) => t.get(p.coords()).copied(),
            Table::Vector(t) => t.get(p.coords()).copied(),
        }
    }

    pub fn is_visited(&self, p: &LatticePoint) -> bool {
        self.site(p).is_some()
    }

    pub fn is_boundary(&self, p: &LatticePoint) -> bool {
        self.site(p).is_some_and(|s| (s.covered as usize) < 2 * self.dim())
    }

    /// Number of time indices `0..=n` at which the walk sat on `p`.
    pub fn multiplicity(&self, p: &LatticePoint) -> u32 {
        self.site(p).map_or(0, |s| s.visits)
    }

    fn sites(&self) -> Vec<(LatticePoint, Site)> {
        let d = self.dim();
        let mut out: Vec<(LatticePoint, Site)> = match &self.table {
            Table::Packed(t) => t.sites.iter().map(|(k, s)| (k.decode(d), *s)).collect(),
            Table::Vector(t) => t.sites.iter().map(|(k, s)| (k.decode(d), *s)).collect(),
        };
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Visited sites in lexicographic order.
    pub fn visited(&self) -> Vec<LatticePoint> {
        self.sites().into_iter().map(|(p, _)| p).collect()
    }

    /// Inner-boundary sites in lexicographic order.
    pub fn boundary(&self) -> Vec<LatticePoint> {
        let full = 2 * self.dim();
        self.sites()
            .into_iter()
            .filter(|(_, s)| (s.covered as usize) < full)
            .map(|(p, _)| p)
            .collect()
    }

    fn histograms(&self) -> (&[u64], &[u64]) {
        match &self.table {
            Table::Packed(t) => (&t.range_hist, &t.boundary_hist),
            Table::Vector(t) => (&t.range_hist, &t.boundary_hist),
        }
    }

    /// All statistics of the current prefix, multiplicities `>= p_max` pooled.
    pub fn snapshot(&self, p_max: usize) -> RangeStats {
        let (range_hist, boundary_hist) = self.histograms();
        RangeStats::from_histograms(
            self.steps,
            self.range(),
            self.boundary_len(),
            range_hist,
            boundary_hist,
            p_max,
        )
    }

    /// Whether sites are currently hashed with packed single-word keys.
    pub fn uses_packed_keys(&self) -> bool {
        matches!(self.table, Table::Packed(_))
    }
}
