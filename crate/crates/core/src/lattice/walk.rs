use std::fmt::Write as _;

use super::{LatticePoint, SeedSpec, StepDistribution, StepSampler, StepStream};
use crate::error::{invalid, Error, Result};

/// A finite walk: a start point and a sequence of increments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkPath {
    start: LatticePoint,
    steps: Vec<i64>,
}

impl WalkPath {
    pub fn new(start: LatticePoint) -> Self {
        WalkPath {
            start,
            steps: Vec::new(),
        }
    }

    pub fn from_origin(d: usize) -> Self {
        Self::new(LatticePoint::origin(d))
    }

    /// Builds a path from explicit increments; all must share the start's dimension.
    pub fn from_increments(start: LatticePoint, increments: &[LatticePoint]) -> Result<Self> {
        let mut p = Self::new(start);
        for inc in increments {
            if inc.dim() != p.dim() {
                return invalid(format!("increment {inc} has wrong dimension"));
            }
            p.push(inc.coords());
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.start.dim()
    }

    /// Number of steps `n`.
    pub fn len(&self) -> usize {
        self.steps.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> &LatticePoint {
        &self.start
    }

    pub fn push(&mut self, inc: &[i64]) {
        debug_assert_eq!(inc.len(), self.dim());
        self.steps.extend_from_slice(inc);
    }

    pub fn step(&self, i: usize) -> &[i64] {
        let d = self.dim();
        &self.steps[i * d..(i + 1) * d]
    }

    pub fn increments(&self) -> impl Iterator<Item = &[i64]> {
        self.steps.chunks_exact(self.dim())
    }

    /// Positions `S_0, S_1, ..., S_n`.
    pub fn positions(&self) -> Vec<LatticePoint> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut cur = self.start.clone();
        out.push(cur.clone());
        for inc in self.increments() {
            cur.add_assign_slice(inc);
            out.push(cur.clone());
        }
        out
    }

    pub fn end(&self) -> LatticePoint {
        let mut cur = self.start.clone();
        for inc in self.increments() {
            cur.add_assign_slice(inc);
        }
        cur
    }

    /// First `k` steps of this path.
    pub fn prefix(&self, k: usize) -> WalkPath {
        WalkPath {
            start: self.start.clone(),
            steps: self.steps[..k * self.dim()].to_vec(),
        }
    }

    /// Fixture format: a header line `d n`, then one increment per line.
    pub fn dump(&self) -> String {
        let mut out = format!("{} {}\n", self.dim(), self.len());
        for inc in self.increments() {
            let line: Vec<String> = inc.iter().map(|c| c.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the fixture format written by [`WalkPath::dump`]; the walk starts at the origin.
    pub fn load(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad header `{header}`"),
            })?;
        let [d, n] = nums[..] else {
            return Err(Error::Parse {
                line: 1,
                msg: "header must be `d n`".into(),
            });
        };
        if d == 0 {
            return Err(Error::Parse {
                line: 1,
                msg: "dimension must be at least 1".into(),
            });
        }
        let mut path = WalkPath::from_origin(d);
        for (idx, line) in lines {
            let inc: Vec<i64> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse {
                    line: idx + 1,
                    msg: format!("bad increment `{line}`"),
                })?;
            if inc.len() != d {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("increment has {} coordinates, expected {d}", inc.len()),
                });
            }
            path.push(&inc);
        }
        if path.len() != n {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {n} steps, found {}", path.len()),
            });
        }
        Ok(path)
    }
}

/// Streaming increments of a walk; consumers can take steps one at a time
/// without materializing the path.
pub struct WalkIncrements<'a> {
    dist: &'a StepDistribution,
    stream: StepStream,
    remaining: usize,
}

impl<'a> WalkIncrements<'a> {
    pub fn new(dist: &'a StepDistribution, n: usize, seed: SeedSpec, lane: u64) -> Self {
        let sampler = StepSampler::for_distribution(dist);
        WalkIncrements {
            dist,
            stream: seed.steps(lane, &sampler),
            remaining: n,
        }
    }
}

impl<'a> Iterator for WalkIncrements<'a> {
    type Item = &'a [i64];

    fn next(&mut self) -> Option<&'a [i64]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(self.dist.atom(self.stream.next_atom()))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

/// An `n`-step walk from the origin, determined by `(dist, n, seed)`.
pub fn generate_walk(dist: &StepDistribution, n: usize, seed: SeedSpec) -> WalkPath {
    let mut path = WalkPath::from_origin(dist.dim());
    path.steps.reserve(n * dist.dim());
    for inc in WalkIncrements::new(dist, n, seed, 0) {
        path.push(inc);
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_walk() {
        let p = generate_walk(&StepDistribution::simple(2), 0, SeedSpec::new(1, 0));
        assert!(p.is_empty());
        assert_eq!(p.positions(), vec![LatticePoint::origin(2)]);
    }

    #[test]
    fn deterministic() {
        let dist = StepDistribution::simple(3);
        let a = generate_walk(&dist, 1000, SeedSpec::new(5, 9));
        let b = generate_walk(&dist, 1000, SeedSpec::new(5, 9));
        assert_eq!(a, b);
        assert_ne!(a, generate_walk(&dist, 1000, SeedSpec::new(5, 10)));
    }

    #[test]
    fn prefix_sum_invariant() {
        let dist = StepDistribution::parse("2 1 1/3\n-1 0 1/3\n0 -3 1/3\n").unwrap();
        let p = generate_walk(&dist, 300, SeedSpec::new(3, 1));
        let pos = p.positions();
        let mut acc = vec![0i64; 2];
        for k in 0..=p.len() {
            assert_eq!(pos[k].coords(), &acc[..]);
            if k < p.len() {
                for (a, s) in acc.iter_mut().zip(p.step(k)) {
                    *a += s;
                }
            }
        }
        assert_eq!(p.end(), pos[p.len()]);
    }

    #[test]
    fn streaming_matches_materialized() {
        let dist = StepDistribution::simple(2);
        let seed = SeedSpec::new(11, 4);
        let streamed: Vec<Vec<i64>> = WalkIncrements::new(&dist, 50, seed, 0)
            .map(|s| s.to_vec())
            .collect();
        let path = generate_walk(&dist, 50, seed);
        let mat: Vec<Vec<i64>> = path.increments().map(|s| s.to_vec()).collect();
        assert_eq!(streamed, mat);
    }

    #[test]
    fn dump_load_round_trip() {
        let p = generate_walk(&StepDistribution::simple(3), 40, SeedSpec::new(2, 2));
        let text = p.dump();
        assert!(text.starts_with("3 40\n"));
        assert_eq!(WalkPath::load(&text).unwrap(), p);
    }

    #[test]
    fn load_rejects_bad_input() {
        assert!(WalkPath::load("").is_err());
        assert!(WalkPath::load("2 1\n1\n").is_err());
        assert!(WalkPath::load("2 2\n1 0\n").is_err());
        assert!(WalkPath::load("x 2\n").is_err());
    }
}
