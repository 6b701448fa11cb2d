//! Exact occupation and avoidance probabilities of the planar simple walk,
//! and the last-exit decomposition over the two-point set `{0, b}`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use super::{check_budget, DpMass, GridDP};
use crate::error::{invalid, Result};
use crate::lattice::LatticePoint;

/// Default cap on the number of DP steps.
pub const DEFAULT_DP_BUDGET: usize = 2000;

/// Where the avoidance walk starts: the origin or the neighbor `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AvoidFrom {
    Origin,
    Neighbor,
}

fn planar(x: &LatticePoint) -> Result<(i64, i64)> {
    match x.coords() {
        &[a, b] => Ok((a, b)),
        _ => invalid(format!("{x} is not a planar point")),
    }
}

/// Validates that `b` is one of the four neighbors of the origin.
pub fn planar_neighbor(b: &LatticePoint) -> Result<(i64, i64)> {
    let (x, y) = planar(b)?;
    if x.abs() + y.abs() != 1 {
        return invalid(format!("{b} is not a neighbor of the origin"));
    }
    Ok((x, y))
}

fn dp_budget(steps: usize, budget: usize) -> Result<()> {
    check_budget("lattice DP steps", steps as u128, budget as u128)
}

fn to_ratio(count: BigUint, steps: usize) -> BigRational {
    BigRational::new(BigInt::from(count), BigInt::from(BigUint::from(4u8).pow(steps as u32)))
}

/// Mass at each probe site after every step `0..=steps` of a free walk from the origin.
pub fn occupation_series<T: DpMass>(steps: usize, probes: &[(i64, i64)]) -> Vec<Vec<T>> {
    let mut dp: GridDP<T> = GridDP::new((0, 0), steps, &[]);
    let mut out = Vec::with_capacity(steps + 1);
    out.push(probes.iter().map(|&(x, y)| dp.value_at(x, y)).collect());
    for _ in 0..steps {
        dp.advance();
        out.push(probes.iter().map(|&(x, y)| dp.value_at(x, y)).collect());
    }
    out
}

/// Remaining mass after each step `0..=n_max` of a walk that is killed on
/// entering `{0, b}` at times `>= 1`.
pub fn avoidance_series<T: DpMass>(from: AvoidFrom, b: (i64, i64), n_max: usize) -> Vec<T> {
    let start = match from {
        AvoidFrom::Origin => (0, 0),
        AvoidFrom::Neighbor => b,
    };
    let mut dp: GridDP<T> = GridDP::new(start, n_max, &[(0, 0), b]);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(T::unit());
    for _ in 0..n_max {
        dp.advance();
        out.push(dp.total());
    }
    out
}

/// `P(S_j = x)` for the planar simple walk, in floating point.
pub fn occupation_probability(j: usize, x: &LatticePoint, budget: usize) -> Result<f64> {
    let p = planar(x)?;
    dp_budget(j, budget)?;
    let mut dp: GridDP<f64> = GridDP::new((0, 0), j, &[]);
    for _ in 0..j {
        dp.advance();
    }
    Ok(dp.value_at(p.0, p.1))
}

/// `P(S_j = x)` as an exact rational.
pub fn occupation_probability_exact(j: usize, x: &LatticePoint, budget: usize) -> Result<BigRational> {
    let p = planar(x)?;
    dp_budget(j, budget)?;
    let mut dp: GridDP<BigUint> = GridDP::new((0, 0), j, &[]);
    for _ in 0..j {
        dp.advance();
    }
    Ok(to_ratio(dp.value_at(p.0, p.1), j))
}

/// `P^start({S_1..S_n} ∩ {0, b} = ∅)` in floating point.
pub fn avoidance_probability(from: AvoidFrom, b: &LatticePoint, n: usize, budget: usize) -> Result<f64> {
    let b = planar_neighbor(b)?;
    dp_budget(n, budget)?;
    Ok(*avoidance_series::<f64>(from, b, n).last().expect("nonempty"))
}

/// Exact rational version of [`avoidance_probability`].
pub fn avoidance_probability_exact(
    from: AvoidFrom,
    b: &LatticePoint,
    n: usize,
    budget: usize,
) -> Result<BigRational> {
    let b = planar_neighbor(b)?;
    dp_budget(n, budget)?;
    let count = avoidance_series::<BigUint>(from, b, n).pop().expect("nonempty");
    Ok(to_ratio(count, n))
}

/// Ingredients of the last-exit decomposition up to time `2 n_max`.
struct LastExitTables<T> {
    at_origin: Vec<T>,
    at_b: Vec<T>,
    avoid_from_origin: Vec<T>,
    avoid_from_b: Vec<T>,
}

fn last_exit_tables<T: DpMass>(b: (i64, i64), n_max: usize) -> LastExitTables<T> {
    let horizon = 2 * n_max;
    let occ = occupation_series::<T>(horizon, &[(0, 0), b]);
    let (at_origin, at_b) = occ.into_iter().map(|v| (v[0].clone(), v[1].clone())).unzip();
    LastExitTables {
        at_origin,
        at_b,
        avoid_from_origin: avoidance_series(AvoidFrom::Origin, b, horizon),
        avoid_from_b: avoidance_series(AvoidFrom::Neighbor, b, horizon),
    }
}

/// Residuals `1 - [Σ_k P(S_2k=0) P^0(avoid 2n-2k) + Σ_k P(S_2k+1=b) P^b(avoid 2n-2k-1)]`
/// for `n = 0..=n_max`, in floating point.
pub fn last_exit_residuals(b: &LatticePoint, n_max: usize, budget: usize) -> Result<Vec<f64>> {
    let b = planar_neighbor(b)?;
    dp_budget(2 * n_max, budget)?;
    let t = last_exit_tables::<f64>(b, n_max);
    Ok((0..=n_max)
        .map(|n| {
            let mut s = 0.0;
            for k in 0..=n {
                s += t.at_origin[2 * k] * t.avoid_from_origin[2 * n - 2 * k];
            }
            for k in 0..n {
                s += t.at_b[2 * k + 1] * t.avoid_from_b[2 * n - 2 * k - 1];
            }
            1.0 - s
        })
        .collect())
}

/// Exact residuals for `n = 0..=n_max`; each must be zero.
pub fn last_exit_residuals_exact(
    b: &LatticePoint,
    n_max: usize,
    budget: usize,
) -> Result<Vec<BigRational>> {
    let b = planar_neighbor(b)?;
    dp_budget(2 * n_max, budget)?;
    let t = last_exit_tables::<BigUint>(b, n_max);
    // With counts, every product term has denominator 4^(2n).
    Ok((0..=n_max)
        .map(|n| {
            let mut s = BigUint::from(0u8);
            for k in 0..=n {
                s += &t.at_origin[2 * k] * &t.avoid_from_origin[2 * n - 2 * k];
            }
            for k in 0..n {
                s += &t.at_b[2 * k + 1] * &t.avoid_from_b[2 * n - 2 * k - 1];
            }
            let total = BigUint::from(4u8).pow(2 * n as u32);
            let num = BigInt::from(total.clone()) - BigInt::from(s);
            BigRational::new(num, BigInt::from(total))
        })
        .collect())
}

/// Residual of the last-exit identity at `n`, floating point.
pub fn last_exit_identity_residual(b: &LatticePoint, n: usize, budget: usize) -> Result<f64> {
    Ok(*last_exit_residuals(b, n, budget)?.last().expect("nonempty"))
}

/// Residual of the last-exit identity at `n`, exact.
pub fn last_exit_identity_residual_exact(
    b: &LatticePoint,
    n: usize,
    budget: usize,
) -> Result<BigRational> {
    Ok(last_exit_residuals_exact(b, n, budget)?.pop().expect("nonempty"))
}
