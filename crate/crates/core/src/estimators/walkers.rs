use rand::RngCore;

use crate::lattice::{origin_neighbor_index, SeedSpec, StepDistribution, StepSampler, StepStream};

/// Randomness lanes of the walks inside one replicate.
pub const LANE_FORWARD: u64 = 0;
pub const LANE_DUAL: u64 = 1;
pub const LANE_AUX_BASE: u64 = 16;

/// A walk from the origin that tracks only its position.
pub struct Walker<'a> {
    dist: &'a StepDistribution,
    stream: StepStream,
    sign: i64,
    pos: Vec<i64>,
}

impl<'a> Walker<'a> {
    /// `sign = -1` gives the dual walk (negated increments).
    pub fn new(dist: &'a StepDistribution, sampler: &StepSampler, seed: SeedSpec, lane: u64, sign: i64) -> Self {
        Walker {
            dist,
            stream: seed.steps(lane, sampler),
            sign,
            pos: vec![0; dist.dim()],
        }
    }

    #[inline]
    pub fn step(&mut self) {
        let inc = self.dist.atom(self.stream.next_atom());
        for (p, x) in self.pos.iter_mut().zip(inc) {
            *p += self.sign * x;
        }
    }

    pub fn position(&self) -> &[i64] {
        &self.pos
    }

    #[inline]
    pub fn at_origin(&self) -> bool {
        self.pos.iter().all(|&c| c == 0)
    }

    /// Index of the current position within the neighbors of the origin.
    #[inline]
    pub fn neighbor_index(&self) -> Option<usize> {
        origin_neighbor_index(&self.pos)
    }
}

/// Which site of `{0, b}` a planar walk reached first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoPointHit {
    Origin,
    Neighbor,
}

const SHIFT: u32 = 32;
// Atom order of the planar simple walk: (-1,0), (1,0), (0,-1), (0,1).
const PLANAR_DELTA: [i64; 4] = [-1, 1, -(1 << SHIFT), 1 << SHIFT];

/// First time `m` in `1..=cap` at which a planar simple walk from the origin
/// sits on `{0, b}` with `b = (1, 0)`, and which site it hit.
///
/// Positions are packed as `x + y 2^32`, so the origin is key 0 and `b` is
/// key 1. Draws the same steps as [`Walker`] on the same lane.
pub fn planar_first_hit(seed: SeedSpec, lane: u64, cap: u64) -> Option<(u64, TwoPointHit)> {
    let mut rng = seed.rng(lane);
    let mut pos: i64 = 0;
    let mut t: u64 = 0;
    while t < cap {
        let mut buf = rng.next_u64();
        let take = (cap - t).min(32);
        for i in 0..take {
            pos += PLANAR_DELTA[(buf & 3) as usize];
            buf >>= 2;
            if (pos as u64) <= 1 {
                let which = if pos == 0 { TwoPointHit::Origin } else { TwoPointHit::Neighbor };
                return Some((t + i + 1, which));
            }
        }
        t += take;
    }
    None
}
