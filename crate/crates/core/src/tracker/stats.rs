use serde::{Deserialize, Serialize};

/// Default multiplicity cap; counts at or above it share one bucket.
pub const DEFAULT_P_MAX: usize = 8;

/// Snapshot of the range statistics of one path prefix.
///
/// `q`, `j_exact` and `j_atleast` are indexed by multiplicity `p = 1..=p_max`
/// (vector index `p - 1`). The last bucket of `q` and `j_exact` pools every
/// multiplicity `>= p_max`; `pooled_visits` is the total visit count of the
/// sites in that pooled bucket of `q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeStats {
    pub n: u64,
    pub range: u64,
    pub boundary: u64,
    pub p_max: usize,
    pub q: Vec<u64>,
    pub j_exact: Vec<u64>,
    pub j_atleast: Vec<u64>,
    pub pooled_visits: u64,
}

impl RangeStats {
    /// Builds a snapshot from multiplicity histograms (index = visit count).
    pub(crate) fn from_histograms(
        n: u64,
        range: u64,
        boundary: u64,
        range_hist: &[u64],
        boundary_hist: &[u64],
        p_max: usize,
    ) -> Self {
        assert!(p_max >= 1, "p_max must be at least 1");
        let at = |h: &[u64], i: usize| h.get(i).copied().unwrap_or(0);
        let tail = |h: &[u64], from: usize| h.iter().skip(from).sum::<u64>();

        let mut q: Vec<u64> = (1..p_max).map(|p| at(range_hist, p)).collect();
        q.push(tail(range_hist, p_max));
        let mut j_exact: Vec<u64> = (1..p_max).map(|p| at(boundary_hist, p)).collect();
        j_exact.push(tail(boundary_hist, p_max));
        let mut j_atleast = vec![0; p_max];
        let mut acc = 0;
        for p in (1..=p_max).rev() {
            acc += j_exact[p - 1];
            j_atleast[p - 1] = acc;
        }
        let pooled_visits = range_hist
            .iter()
            .enumerate()
            .skip(p_max)
            .map(|(m, c)| m as u64 * c)
            .sum();
        RangeStats {
            n,
            range,
            boundary,
            p_max,
            q,
            j_exact,
            j_atleast,
            pooled_visits,
        }
    }

    /// `Q_n^(p)`; for `p == p_max` the pooled count of multiplicities `>= p_max`.
    pub fn q(&self, p: usize) -> u64 {
        self.q[p - 1]
    }

    /// `J_n^(p)`; pooled at `p_max` like [`RangeStats::q`].
    pub fn j_exact(&self, p: usize) -> u64 {
        self.j_exact[p - 1]
    }

    /// `J_n^p`, boundary sites visited at least `p` times.
    pub fn j_atleast(&self, p: usize) -> u64 {
        self.j_atleast[p - 1]
    }

    /// Checks the combinatorial identities every snapshot must satisfy.
    pub fn check_invariants(&self) -> Result<(), String> {
        let fail = |what: &str| Err(format!("{what} violated in {self:?}"));
        if self.boundary != self.j_atleast(1) {
            return fail("L = J^1");
        }
        if self.j_atleast.windows(2).any(|w| w[1] > w[0]) {
            return fail("J^p nonincreasing");
        }
        if self.j_exact.iter().zip(&self.q).any(|(j, q)| j > q) {
            return fail("J^(p) <= Q^(p)");
        }
        if self.q.iter().sum::<u64>() != self.range {
            return fail("sum Q = R");
        }
        let unpooled: u64 = self
            .q
            .iter()
            .take(self.p_max - 1)
            .enumerate()
            .map(|(i, c)| (i as u64 + 1) * c)
            .sum();
        if unpooled + self.pooled_visits != self.n + 1 {
            return fail("sum p Q(p) = n + 1");
        }
        if !(1 <= self.boundary && self.boundary <= self.range && self.range <= self.n + 1) {
            return fail("1 <= L <= R <= n + 1");
        }
        Ok(())
    }
}
