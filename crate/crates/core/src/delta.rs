//! Catch-up time on the circle.
//!
//! `delta(x)` is the unique non-negative `d` with `2 sin(x + d/2) = d`. It is
//! the time a robot needs to intercept a partner that stands at arc
//! distance `2x` and keeps walking along the perimeter away from it.

use std::f64::consts::{PI, TAU};

use crate::error::{EvacError, Result};
use crate::numeric::bisect;

const BISECT_TOL: f64 = 1e-12;
const NEWTON_STEPS: usize = 5;

fn residual(x: f64, d: f64) -> f64 {
    2.0 * (x + 0.5 * d).sin() - d
}

/// Solves `2 sin(x + d/2) = d` for its non-negative root, `x ∈ [0, π]`.
pub fn delta(x: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&x) {
        return Err(EvacError::Domain(format!("delta is defined on [0, π], got {x}")));
    }
    // the residual is strictly decreasing in d, so the bracket holds one root
    let coarse = bisect(|d| residual(x, d), 0.0, TAU, BISECT_TOL, 200)?;
    Ok(polish(x, coarse))
}

fn polish(x: f64, start: f64) -> f64 {
    let mut d = start;
    let mut r = residual(x, d).abs();
    for _ in 0..NEWTON_STEPS {
        let slope = (x + 0.5 * d).cos() - 1.0;
        if slope == 0.0 {
            break;
        }
        let next = d - residual(x, d) / slope;
        let rn = residual(x, next).abs();
        if !(next >= 0.0) || !(rn < r) || (next - start).abs() > 2.0 * BISECT_TOL {
            break;
        }
        d = next;
        r = rn;
        if r == 0.0 {
            break;
        }
    }
    d
}

/// Catch-up time when founder and partner are at arc distance `2·arc_gap` and
/// the partner keeps searching along the complementary arc.
pub fn catch_time(arc_gap: f64) -> Result<f64> {
    delta(arc_gap)
}
