//! Reproducible randomness.
//!
//! Every walk is driven by its own ChaCha8 keystream. The key is derived from
//! the master seed and a *lane* (the role of the walk inside a replicate:
//! forward, dual, auxiliary), and the ChaCha stream id is the replicate index.
//! No generator state is shared between replicates, so replicate `r` can be
//! regenerated from `(master, r)` on any worker.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::StepDistribution;

/// Address of one replicate's randomness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master: u64,
    pub stream: u64,
}

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SeedSpec {
    pub fn new(master: u64, stream: u64) -> Self {
        SeedSpec { master, stream }
    }

    /// Independent generator for walk role `lane` of this replicate.
    pub fn rng(&self, lane: u64) -> ChaCha8Rng {
        let mut state = self.master ^ lane.wrapping_mul(0xD1B5_4A32_D192_ED03);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream);
        rng
    }

    /// Step stream for walk role `lane`.
    pub fn steps(&self, lane: u64, sampler: &StepSampler) -> StepStream {
        StepStream::new(self.rng(lane), sampler.clone())
    }
}

/// How atom indices are drawn from raw random bits.
#[derive(Clone, Debug)]
pub enum StepSampler {
    /// Uniform over `2^bits` atoms: take `bits` bits at a time.
    Bits { bits: u32 },
    /// Uniform over `n <= 256` atoms: one byte, rejected above `limit`.
    Byte { n: u32, limit: u32 },
    /// Walker alias table for arbitrary weights.
    Alias { prob: Vec<f64>, alias: Vec<u32> },
}

impl StepSampler {
    pub fn for_distribution(dist: &StepDistribution) -> Self {
        let n = dist.len();
        if dist.is_uniform() {
            if n.is_power_of_two() {
                return StepSampler::Bits {
                    bits: n.trailing_zeros(),
                };
            }
            if n <= 256 {
                let n = n as u32;
                return StepSampler::Byte {
                    n,
                    limit: 256 - 256 % n,
                };
            }
        }
        Self::alias(dist.probs())
    }

    fn alias(weights: &[f64]) -> Self {
        let n = weights.len();
        let total: f64 = weights.iter().sum();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * n as f64 / total).collect();
        let mut alias = vec![0u32; n];
        let mut prob = vec![1.0; n];
        let (mut small, mut large): (Vec<usize>, Vec<usize>) =
            (0..n).partition(|&i| scaled[i] < 1.0);
        while let (Some(s), Some(&l)) = (small.pop(), large.last()) {
            prob[s] = scaled[s];
            alias[s] = l as u32;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        StepSampler::Alias { prob, alias }
    }
}

/// A stream of atom indices backed by one ChaCha8 keystream.
#[derive(Clone, Debug)]
pub struct StepStream {
    rng: ChaCha8Rng,
    sampler: StepSampler,
    buf: u64,
    avail: u32,
}

impl StepStream {
    pub fn new(rng: ChaCha8Rng, sampler: StepSampler) -> Self {
        StepStream {
            rng,
            sampler,
            buf: 0,
            avail: 0,
        }
    }

    #[inline(always)]
    fn take_bits(&mut self, bits: u32) -> u64 {
        if self.avail < bits {
            self.buf = self.rng.next_u64();
            self.avail = 64;
        }
        let v = self.buf & ((1u64 << bits) - 1);
        self.buf >>= bits;
        self.avail -= bits;
        v
    }

    /// Index of the next atom.
    #[inline(always)]
    pub fn next_atom(&mut self) -> usize {
        match self.sampler {
            StepSampler::Bits { bits } => self.take_bits(bits) as usize,
            StepSampler::Byte { n, limit } => loop {
                let b = self.take_bits(8) as u32;
                if b < limit {
                    return (b % n) as usize;
                }
            },
            StepSampler::Alias {
                ref prob,
                ref alias,
            } => {
                let u = self.rng.next_u64();
                let n = prob.len() as u64;
                let column = ((u >> 32) * n >> 32) as usize;
                let coin = (u & 0xFFFF_FFFF) as f64 / 4_294_967_296.0;
                if coin < prob[column] {
                    column
                } else {
                    alias[column] as usize
                }
            }
        }
    }

    /// Uniform draw in `[0, 1)` from the same keystream.
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;

    #[test]
    fn same_seed_same_stream() {
        let s = StepSampler::for_distribution(&StepDistribution::simple(2));
        let a: Vec<usize> = {
            let mut st = SeedSpec::new(7, 3).steps(0, &s);
            (0..500).map(|_| st.next_atom()).collect()
        };
        let b: Vec<usize> = {
            let mut st = SeedSpec::new(7, 3).steps(0, &s);
            (0..500).map(|_| st.next_atom()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn lanes_and_streams_differ() {
        let s = StepSampler::for_distribution(&StepDistribution::simple(2));
        let draw = |seed: SeedSpec, lane| -> Vec<usize> {
            let mut st = seed.steps(lane, &s);
            (0..64).map(|_| st.next_atom()).collect()
        };
        let base = draw(SeedSpec::new(1, 0), 0);
        assert_ne!(base, draw(SeedSpec::new(1, 1), 0));
        assert_ne!(base, draw(SeedSpec::new(1, 0), 1));
        assert_ne!(base, draw(SeedSpec::new(2, 0), 0));
    }

    #[test]
    fn sampler_choice() {
        assert!(matches!(
            StepSampler::for_distribution(&StepDistribution::simple(2)),
            StepSampler::Bits { bits: 2 }
        ));
        assert!(matches!(
            StepSampler::for_distribution(&StepDistribution::simple(3)),
            StepSampler::Byte { n: 6, limit: 252 }
        ));
    }

    fn frequencies(dist: &StepDistribution, draws: usize) -> Vec<f64> {
        let s = StepSampler::for_distribution(dist);
        let mut st = SeedSpec::new(99, 0).steps(0, &s);
        let mut counts = vec![0usize; dist.len()];
        for _ in 0..draws {
            counts[st.next_atom()] += 1;
        }
        counts.iter().map(|&c| c as f64 / draws as f64).collect()
    }

    #[test]
    fn byte_sampler_is_uniform() {
        let f = frequencies(&StepDistribution::simple(3), 600_000);
        let sd = (1.0 / 6.0 * 5.0 / 6.0 / 600_000.0f64).sqrt();
        for p in f {
            assert!((p - 1.0 / 6.0).abs() < 4.0 * sd, "{p}");
        }
    }

    #[test]
    fn alias_sampler_matches_weights() {
        let dist = StepDistribution::float(vec![
            (LatticePoint::new(vec![1]), 0.5),
            (LatticePoint::new(vec![-1]), 0.3),
            (LatticePoint::new(vec![2]), 0.2),
        ])
        .unwrap();
        let n = 400_000;
        let f = frequencies(&dist, n);
        for (p, w) in f.iter().zip(dist.probs()) {
            let sd = (w * (1.0 - w) / n as f64).sqrt();
            assert!((p - w).abs() < 4.0 * sd, "{p} vs {w}");
        }
    }
}
