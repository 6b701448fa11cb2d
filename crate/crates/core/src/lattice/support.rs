use super::{LatticePoint, StepDistribution};
use crate::error::{invalid, Result};

/// Whether the support of `dist` generates all of `Z^d` as a group.
pub fn validate_support(dist: &StepDistribution) -> Result<bool> {
    generates_full_lattice(dist.atoms(), dist.dim())
}

/// Whether the integer combinations of `vectors` span exactly `Z^d`.
///
/// Row-reduces the matrix of vectors to echelon form with unimodular integer
/// row operations. The generated lattice is `Z^d` iff there are `d` pivots
/// and their product has absolute value one.
pub fn generates_full_lattice(vectors: &[LatticePoint], d: usize) -> Result<bool> {
    if d == 0 {
        return invalid("dimension must be at least 1");
    }
    let mut rows: Vec<Vec<i128>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.dim() != d {
            return invalid(format!("vector {v} has dimension {}, expected {d}", v.dim()));
        }
        rows.push(v.coords().iter().map(|&c| c as i128).collect());
    }

    let mut pivot_row = 0;
    let mut index: i128 = 1;
    for col in 0..d {
        // Euclid on the column below pivot_row until one nonzero entry remains.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if rows[r][col] != 0
                    && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else {
                return Ok(false);
            };
            rows.swap(pivot_row, b);
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                if rows[r][col] != 0 {
                    let f = rows[r][col] / rows[pivot_row][col];
                    let (head, tail) = rows.split_at_mut(r);
                    let pivot = &head[pivot_row];
                    for (x, p) in tail[0].iter_mut().zip(pivot) {
                        *x -= f * p;
                    }
                    if tail[0][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        index *= rows[pivot_row][col].abs();
        pivot_row += 1;
    }
    Ok(index == 1)
}
