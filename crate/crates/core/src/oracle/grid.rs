use num_bigint::BigUint;
use num_traits::Zero;

/// Cell content of a planar simple-walk DP: a probability, or an exact path count.
pub trait DpMass: Clone + Send + Sync {
    fn zero() -> Self;
    fn unit() -> Self;
    fn is_zero(&self) -> bool;
    /// One step of the simple walk: combine the four neighbor cells.
    fn gather(a: &Self, b: &Self, c: &Self, d: &Self) -> Self;
    fn accumulate(&mut self, other: &Self);
}

impl DpMass for f64 {
    fn zero() -> Self {
        0.0
    }
    fn unit() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    #[inline]
    fn gather(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        0.25 * ((a + b) + (c + d))
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
}

/// Path counts; the probability after `j` steps is `count / 4^j`.
impl DpMass for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        BigUint::from(1u8)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn gather(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let mut s = a.clone();
        s += b;
        s += c;
        s += d;
        s
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
}

/// Dense occupancy DP for the planar simple walk on the box `{-R..R}^2`.
///
/// Sites in `forbidden` absorb mass (it is deleted after each step). Only the
/// cells reachable at the current step are touched: the diamond around the
/// start, on one parity class. Each buffer only ever holds one parity class,
/// so overwriting the current diamond is a complete update.
#[derive(Clone, Debug)]
pub struct GridDP<T: DpMass> {
    radius: i64,
    width: i64,
    start: (i64, i64),
    forbidden: Vec<(i64, i64)>,
    bufs: [Vec<T>; 2],
    step: usize,
}

impl<T: DpMass> GridDP<T> {
    /// A walk at `start` on a box large enough for `max_steps` steps.
    pub fn new(start: (i64, i64), max_steps: usize, forbidden: &[(i64, i64)]) -> Self {
        let radius = max_steps as i64 + start.0.abs().max(start.1.abs());
        // One cell of padding on each side keeps neighbor reads in bounds.
        let width = 2 * radius + 3;
        let cells = (width * width) as usize;
        let mut bufs = [vec![T::zero(); cells], vec![T::zero(); cells]];
        let idx = ((start.0 + radius + 1) * width + start.1 + radius + 1) as usize;
        bufs[0][idx] = T::unit();
        GridDP {
            radius,
            width,
            start,
            forbidden: forbidden.to_vec(),
            bufs,
            step: 0,
        }
    }

    #[inline]
    fn idx(&self, x: i64, y: i64) -> usize {
        ((x + self.radius + 1) * self.width + y + self.radius + 1) as usize
    }

    pub fn steps(&self) -> usize {
        self.step
    }

    /// Advances one step.
    pub fn advance(&mut self) {
        let j = self.step as i64 + 1;
        let max_steps = self.radius - self.start.0.abs().max(self.start.1.abs());
        assert!(j <= max_steps, "GridDP stepped past its exact horizon");
        let w = self.width as usize;
        let (lo, hi) = self.bufs.split_at_mut(1);
        let (src, dst) = if j % 2 == 1 {
            (&lo[0], &mut hi[0])
        } else {
            (&hi[0], &mut lo[0])
        };
        let (sx, sy) = self.start;
        let r = self.radius;
        let width = self.width;
        let at = |x: i64, y: i64| ((x + r + 1) * width + y + r + 1) as usize;
        for dx in -j..=j {
            let x = sx + dx;
            let span = j - dx.abs();
            let mut dy = -span;
            while dy <= span {
                let c = at(x, sy + dy);
                dst[c] = T::gather(&src[c - w], &src[c + w], &src[c - 1], &src[c + 1]);
                dy += 2;
            }
        }
        for &(fx, fy) in &self.forbidden {
            if fx.abs() <= r && fy.abs() <= r {
                dst[at(fx, fy)] = T::zero();
            }
        }
        self.step += 1;
    }

    fn current(&self) -> &[T] {
        &self.bufs[self.step % 2]
    }

    /// Mass at `(x, y)` after the current number of steps.
    pub fn value_at(&self, x: i64, y: i64) -> T {
        if x.abs() > self.radius || y.abs() > self.radius {
            return T::zero();
        }
        self.current()[self.idx(x, y)].clone()
    }

    /// Total mass still on the grid.
    pub fn total(&self) -> T {
        let j = self.step as i64;
        let (sx, sy) = self.start;
        let cur = self.current();
        let mut acc = T::zero();
        for dx in -j..=j {
            let span = j - dx.abs();
            let mut dy = -span;
            while dy <= span {
                acc.accumulate(&cur[self.idx(sx + dx, sy + dy)]);
                dy += 2;
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_is_conserved_without_forbidden_sites() {
        let mut g: GridDP<BigUint> = GridDP::new((0, 0), 12, &[]);
        for j in 1..=12u32 {
            g.advance();
            assert_eq!(g.total(), BigUint::from(4u32).pow(j));
        }
        let mut f: GridDP<f64> = GridDP::new((0, 0), 30, &[]);
        for _ in 0..30 {
            f.advance();
        }
        assert!((f.total() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn one_and_two_steps() {
        let mut g: GridDP<f64> = GridDP::new((0, 0), 2, &[]);
        g.advance();
        assert_eq!(g.value_at(1, 0), 0.25);
        assert_eq!(g.value_at(0, 0), 0.0);
        g.advance();
        assert_eq!(g.value_at(0, 0), 0.25);
        assert_eq!(g.value_at(1, 1), 0.125);
        assert_eq!(g.value_at(2, 0), 0.0625);
    }

    #[test]
    fn absorbing_sites_remove_mass() {
        let mut g: GridDP<BigUint> = GridDP::new((0, 0), 1, &[(0, 0), (1, 0)]);
        g.advance();
        assert_eq!(g.total(), BigUint::from(3u32));
    }

    #[test]
    #[should_panic]
    fn refuses_to_step_past_horizon() {
        let mut g: GridDP<f64> = GridDP::new((0, 0), 1, &[]);
        g.advance();
        g.advance();
    }
}
