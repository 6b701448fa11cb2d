use serde::Serialize;

use crate::error::{invalid, Result};

/// Result of the Dirichlet problem for `P^x(T_0 < T_b)` on a finite box.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarmonicResult {
    pub radius: usize,
    /// `(1/4) sum_{y in N(0)} h(y)`.
    pub value: f64,
    pub sweeps: usize,
    /// Largest update of the final sweep.
    pub last_change: f64,
}

/// Solves `h = mean of the four neighbors` on `{-R..R}^2` with `h(0) = 1`,
/// `h(b) = 0` for `b = (1, 0)`, and `h = 1/2` on the outer ring, by red-black
/// successive over-relaxation, and returns `c~ = (1/4) sum_{y in N(0)} h(y)`.
pub fn harmonic_ctilde(radius: usize, tol: f64, max_sweeps: usize) -> Result<HarmonicResult> {
    if radius < 2 {
        return invalid("harmonic box radius must be at least 2");
    }
    let w = 2 * radius + 1;
    let r = radius as i64;
    let at = |x: i64, y: i64| ((x + r) as usize) * w + (y + r) as usize;
    let mut h = vec![0.5; w * w];
    let origin = at(0, 0);
    let b = at(1, 0);
    h[origin] = 1.0;
    h[b] = 0.0;
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / (w as f64 - 1.0)).sin());
    let mut sweeps = 0;
    let mut change = f64::INFINITY;
    while sweeps < max_sweeps && change > tol {
        change = 0.0;
        for color in 0..2 {
            for i in 1..w - 1 {
                let row = i * w;
                let start = 1 + (i + color + radius) % 2;
                let mut j = start;
                while j < w - 1 {
                    let c = row + j;
                    if c != origin && c != b {
                        let avg = 0.25 * (h[c - w] + h[c + w] + h[c - 1] + h[c + 1]);
                        let delta = omega * (avg - h[c]);
                        h[c] += delta;
                        change = f64::max(change, delta.abs());
                    }
                    j += 2;
                }
            }
        }
        sweeps += 1;
    }
    let value = 0.25 * (h[at(-1, 0)] + h[at(1, 0)] + h[at(0, -1)] + h[at(0, 1)]);
    Ok(HarmonicResult {
        radius,
        value,
        sweeps,
        last_change: change,
    })
}
