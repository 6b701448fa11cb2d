//! Lattice geometry, step distributions and walk generation.
//!
//! Points live in `Z^d` for a dimension fixed per experiment. A walk is
//! driven by a [`StepDistribution`] with finite support, and randomness is
//! addressed by a [`SeedSpec`] so every replicate can be regenerated from
//! `(master seed, stream)` alone.

mod distribution;
mod rng;
mod support;
mod walk;

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

pub use distribution::{StepDistribution, FLOAT_SUM_TOLERANCE};
pub use rng::{SeedSpec, StepSampler, StepStream};
pub use support::{generates_full_lattice, validate_support};
pub use walk::{generate_walk, WalkIncrements, WalkPath};

/// A point of the integer lattice `Z^d`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticePoint(SmallVec<[i64; 4]>);

impl LatticePoint {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        LatticePoint(SmallVec::from_vec(coords.into()))
    }

    pub fn from_slice(coords: &[i64]) -> Self {
        LatticePoint(SmallVec::from_slice(coords))
    }

    pub fn origin(d: usize) -> Self {
        LatticePoint(SmallVec::from_elem(0, d))
    }

    /// The unit vector `sign * e_axis`.
    pub fn unit(d: usize, axis: usize, sign: i64) -> Self {
        let mut p = Self::origin(d);
        p.0[axis] = sign;
        p
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    #[inline]
    pub fn coords_mut(&mut self) -> &mut [i64] {
        &mut self.0
    }

    pub fn is_origin(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn l1_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }

    pub fn max_abs(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    pub fn add_assign_slice(&mut self, inc: &[i64]) {
        debug_assert_eq!(inc.len(), self.dim());
        for (c, i) in self.0.iter_mut().zip(inc) {
            *c += i;
        }
    }
}

impl Index<usize> for LatticePoint {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add<&LatticePoint> for &LatticePoint {
    type Output = LatticePoint;
    fn add(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub<&LatticePoint> for &LatticePoint {
    type Output = LatticePoint;
    fn sub(self, rhs: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticePoint {
    type Output = LatticePoint;
    fn neg(self) -> LatticePoint {
        LatticePoint(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// The `2d` points at L1-distance one from `a`, ordered by coordinate index
/// ascending with the minus neighbor before the plus neighbor.
pub fn neighbors(a: &LatticePoint) -> Vec<LatticePoint> {
    let mut out = Vec::with_capacity(2 * a.dim());
    for axis in 0..a.dim() {
        for sign in [-1, 1] {
            let mut p = a.clone();
            p.0[axis] += sign;
            out.push(p);
        }
    }
    out
}

/// Index of `p` within `neighbors(origin)`, if `p` is a neighbor of the origin.
#[inline]
pub fn origin_neighbor_index(p: &[i64]) -> Option<usize> {
    let mut found = None;
    for (axis, &c) in p.iter().enumerate() {
        match c {
            0 => {}
            1 | -1 if found.is_none() => found = Some(2 * axis + usize::from(c == 1)),
            _ => return None,
        }
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neighbors_one_dimension() {
        let n = neighbors(&LatticePoint::new(vec![0]));
        assert_eq!(n, vec![LatticePoint::new(vec![-1]), LatticePoint::new(vec![1])]);
    }

    #[test]
    fn neighbors_two_dimensions_order() {
        let n = neighbors(&LatticePoint::origin(2));
        let want: Vec<LatticePoint> = [[-1, 0], [1, 0], [0, -1], [0, 1]]
            .iter()
            .map(|c| LatticePoint::from_slice(c))
            .collect();
        assert_eq!(n, want);
    }

    #[test]
    fn neighbors_three_dimensions() {
        let a = LatticePoint::new(vec![1, 2, 3]);
        let n = neighbors(&a);
        assert_eq!(n.len(), 6);
        for p in &n {
            let diff = &a - p;
            assert_eq!(diff.l1_norm(), 1);
        }
        assert_eq!(n[0], LatticePoint::new(vec![0, 2, 3]));
        assert_eq!(n[5], LatticePoint::new(vec![1, 2, 4]));
    }

    #[test]
    fn origin_neighbor_index_matches_neighbors_order() {
        for d in 1..=4 {
            for (i, p) in neighbors(&LatticePoint::origin(d)).iter().enumerate() {
                assert_eq!(origin_neighbor_index(p.coords()), Some(i));
            }
            assert_eq!(origin_neighbor_index(LatticePoint::origin(d).coords()), None);
        }
        assert_eq!(origin_neighbor_index(&[1, 1]), None);
        assert_eq!(origin_neighbor_index(&[2, 0]), None);
    }
}
