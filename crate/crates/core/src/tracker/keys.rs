use std::hash::Hash;

use smallvec::SmallVec;

use crate::lattice::LatticePoint;

/// Hash key for a lattice site, with cheap access to the keys of its `2d` neighbors.
pub(crate) trait SiteKey: Clone + Eq + Hash {
    /// Encodes `coords`, or `None` if this scheme cannot represent the site
    /// together with all of its neighbors.
    fn encode(coords: &[i64]) -> Option<Self>;

    fn decode(&self, d: usize) -> LatticePoint;

    /// Key of `coords + sign * e_axis`.
    fn neighbor(&self, coords: &[i64], axis: usize, sign: i64) -> Self;
}

const PACK_BITS: u32 = 21;
const PACK_OFFSET: i64 = 1 << (PACK_BITS - 1);

/// Up to three coordinates packed into one word, 21 bits each with offset `2^20`.
pub(crate) type PackedKey = u64;

impl SiteKey for PackedKey {
    #[inline(always)]
    fn encode(coords: &[i64]) -> Option<Self> {
        if coords.len() > 3 {
            return None;
        }
        let mut key = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            // Neighbors must stay representable as well.
            if c.abs() >= PACK_OFFSET - 1 {
                return None;
            }
            key |= ((c + PACK_OFFSET) as u64) << (PACK_BITS * i as u32);
        }
        Some(key)
    }

    fn decode(&self, d: usize) -> LatticePoint {
        let mask = (1u64 << PACK_BITS) - 1;
        let coords: Vec<i64> = (0..d)
            .map(|i| ((self >> (PACK_BITS * i as u32)) & mask) as i64 - PACK_OFFSET)
            .collect();
        LatticePoint::new(coords)
    }

    #[inline(always)]
    fn neighbor(&self, _coords: &[i64], axis: usize, sign: i64) -> Self {
        let unit = 1u64 << (PACK_BITS * axis as u32);
        if sign > 0 {
            self + unit
        } else {
            self - unit
        }
    }
}

/// Fallback: the coordinate vector itself.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct VectorKey(SmallVec<[i64; 4]>);

impl SiteKey for VectorKey {
    fn encode(coords: &[i64]) -> Option<Self> {
        Some(VectorKey(SmallVec::from_slice(coords)))
    }

    fn decode(&self, _d: usize) -> LatticePoint {
        LatticePoint::from_slice(&self.0)
    }

    fn neighbor(&self, _coords: &[i64], axis: usize, sign: i64) -> Self {
        let mut k = self.clone();
        k.0[axis] += sign;
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_round_trip_and_neighbors() {
        for coords in [vec![0], vec![-5, 7], vec![1 << 19, -(1 << 19), 3]] {
            let k = PackedKey::encode(&coords).unwrap();
            assert_eq!(k.decode(coords.len()).coords(), &coords[..]);
            for axis in 0..coords.len() {
                for sign in [-1, 1] {
                    let mut c = coords.clone();
                    c[axis] += sign;
                    assert_eq!(k.neighbor(&coords, axis, sign), PackedKey::encode(&c).unwrap());
                }
            }
        }
    }

    #[test]
    fn packed_refuses_out_of_range() {
        assert!(PackedKey::encode(&[1 << 20, 0]).is_none());
        assert!(PackedKey::encode(&[0, 0, 0, 0]).is_none());
        assert!(PackedKey::encode(&[(1 << 20) - 2]).is_some());
    }
}
