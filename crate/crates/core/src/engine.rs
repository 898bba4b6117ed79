//! Evacuation cost of an arbitrary pair of trajectories.
//!
//! For an exit at `cycle(x)` the first robot to stand on it (the founder)
//! walks straight towards the point where it can intercept its partner.
//! The intercept time `t̄` is the smallest root, at or after the discovery
//! time `S`, of
//!
//! ```text
//! h(t) = ‖partner(t) − cycle(x)‖ − (t − S)
//! ```
//!
//! after which the two robots return together, for a total cost of
//! `C = 1 + 2t̄ − S = 1 + S + 2E` with `E = t̄ − S`. The leading `1` is the
//! deployment from the centre to the perimeter.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{EvacError, Result};
use crate::geometry::{cycle, largest_coverage_gap, normalize_angle, Point, Trajectory};
use crate::numeric::{adaptive_simpson, golden_max, CompensatedSum, SimpsonConfig};

/// Two discovery times closer than this are treated as a joint discovery.
pub const SIMULTANEOUS_TOL: f64 = 1e-10;

const COVERAGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Founder {
    Robot1,
    Robot2,
    /// Both robots are co-located on the exit when it is first seen.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Discovery {
    /// `S(x)`, measured from the moment the robots reach the perimeter.
    pub time: f64,
    pub founder: Founder,
}

/// Reflection symmetry the engine may exploit when aggregating `C(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    None,
    /// `C(x) = C(2π − x)`; worst and average cases are taken over `[0, π]`.
    Mirror,
}

/// A feasible evacuation algorithm: two trajectories plus the analytic
/// structure the aggregations need.
#[derive(Debug, Clone, Serialize)]
pub struct EvacuationAlgorithm {
    name: String,
    params: Vec<(String, f64)>,
    robots: [Trajectory; 2],
    breakpoints: Vec<f64>,
    symmetry: Symmetry,
    notes: Vec<String>,
}

impl EvacuationAlgorithm {
    /// Fails unless the two trajectories jointly sweep the entire circle.
    pub fn new(name: impl Into<String>, robot1: Trajectory, robot2: Trajectory) -> Result<Self> {
        let name = name.into();
        let mut arcs = robot1.swept_arcs();
        arcs.extend(robot2.swept_arcs());
        let gap = largest_coverage_gap(&arcs);
        if gap > COVERAGE_TOL {
            return Err(EvacError::Infeasible(format!(
                "{name} leaves an unsearched arc of length {gap:e}"
            )));
        }
        Ok(Self {
            name,
            params: Vec::new(),
            robots: [robot1, robot2],
            breakpoints: Vec::new(),
            symmetry: Symmetry::None,
            notes: Vec::new(),
        })
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    /// Angles where `C(x)` may jump or kink. Stored normalised and sorted.
    pub fn with_breakpoints(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(points.into_iter().map(normalize_angle));
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
        self
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn robot(&self, which: usize) -> &Trajectory {
        &self.robots[which]
    }

    pub fn trajectories(&self) -> (&Trajectory, &Trajectory) {
        (&self.robots[0], &self.robots[1])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// Construction findings, e.g. corrections applied to a tabulated phase.
    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// Time at which the later robot finishes searching.
    pub fn search_time(&self) -> f64 {
        self.robots[0]
            .total_duration()
            .max(self.robots[1].total_duration())
    }

    /// Exit positions the aggregations range over.
    pub fn analysis_span(&self) -> (f64, f64) {
        match self.symmetry {
            Symmetry::None => (0.0, TAU),
            Symmetry::Mirror => (0.0, PI),
        }
    }

    /// Breakpoint-delimited sub-intervals of the analysis span.
    pub fn pieces(&self) -> Vec<(f64, f64)> {
        let (lo, hi) = self.analysis_span();
        let mut cuts = vec![lo];
        cuts.extend(
            self.breakpoints
                .iter()
                .copied()
                .filter(|&b| b > lo + 1e-12 && b < hi - 1e-12),
        );
        cuts.push(hi);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// `S(x)` together with the robot that achieves it.
    pub fn first_visit_time(&self, x: f64) -> Result<Discovery> {
        if !x.is_finite() {
            return Err(EvacError::Domain(format!("exit angle must be finite, got {x}")));
        }
        let theta = normalize_angle(x);
        let s1 = self.robots[0].first_visit(theta);
        let s2 = self.robots[1].first_visit(theta);
        let d = match (s1, s2) {
            (Some(a), Some(b)) if (a - b).abs() <= SIMULTANEOUS_TOL => Discovery {
                time: a.min(b),
                founder: Founder::Both,
            },
            (Some(a), Some(b)) if b < a => Discovery {
                time: b,
                founder: Founder::Robot2,
            },
            (Some(a), _) => Discovery {
                time: a,
                founder: Founder::Robot1,
            },
            (None, Some(b)) => Discovery {
                time: b,
                founder: Founder::Robot2,
            },
            (None, None) => {
                return Err(EvacError::Infeasible(format!(
                    "{} never visits cycle({theta})",
                    self.name
                )))
            }
        };
        Ok(d)
    }

    fn partner_of(&self, founder: Founder) -> &Trajectory {
        match founder {
            Founder::Robot1 | Founder::Both => &self.robots[1],
            Founder::Robot2 => &self.robots[0],
        }
    }
}

/// Outcome for a single exit placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evacuation {
    pub x: f64,
    pub founder: Founder,
    /// `S(x)`
    pub search: f64,
    /// `E(x)`
    pub catch: f64,
    /// `C(x)`
    pub cost: f64,
    /// `t̄`, the intercept time.
    pub meet: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WorstCase {
    pub value: f64,
    pub argmax_x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostProfile {
    pub samples: Vec<Evacuation>,
    pub average: f64,
    pub worst: f64,
    pub argmax_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    /// Minimum forward step of the intercept scan.
    pub scan_step: f64,
    /// Width at which the intercept bracket is accepted.
    pub root_tol: f64,
    /// Worst-case grid points per radian of each piece.
    pub grid_density: f64,
    /// Golden-section tolerance in `x` when refining the worst case.
    pub refine_tol: f64,
    /// One-sided offset used to evaluate limits at piece boundaries.
    pub boundary_offset: f64,
    pub quadrature: SimpsonConfig,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            scan_step: 1e-4,
            root_tol: 1e-11,
            grid_density: 4096.0,
            refine_tol: 1e-9,
            boundary_offset: 1e-9,
            quadrature: SimpsonConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Engine {
    pub config: EngineConfig,
}

impl Engine {
    pub fn new(config: EngineConfig) -> Self {
        Self { config }
    }

    /// `h_x(t)` for the founder of `cycle(x)`; requires `t ≥ S(x)`.
    pub fn h(&self, algo: &EvacuationAlgorithm, x: f64, t: f64) -> Result<f64> {
        let found = algo.first_visit_time(x)?;
        if !(t >= found.time - SIMULTANEOUS_TOL) {
            return Err(EvacError::Domain(format!(
                "h is defined for t ≥ S(x) = {}, got {t}",
                found.time
            )));
        }
        let exit = cycle(x);
        Ok(gap_function(algo.partner_of(found.founder), exit, found.time, t))
    }

    pub fn evacuation_cost(&self, algo: &EvacuationAlgorithm, x: f64) -> Result<Evacuation> {
        let found = algo.first_visit_time(x)?;
        let s = found.time;
        let meet = match found.founder {
            Founder::Both => s,
            f => {
                let partner = algo.partner_of(f);
                let horizon = partner.total_duration().max(s) + 3.0;
                self.intercept(partner, cycle(x), s, horizon)
                    .ok_or_else(|| {
                        EvacError::Infeasible(format!(
                            "{}: no intercept for x = {x} before t = {horizon}",
                            algo.name()
                        ))
                    })?
            }
        };
        Ok(Evacuation {
            x: normalize_angle(x),
            founder: found.founder,
            search: s,
            catch: meet - s,
            cost: 1.0 + 2.0 * meet - s,
            meet,
        })
    }

    pub fn cost(&self, algo: &EvacuationAlgorithm, x: f64) -> Result<f64> {
        self.evacuation_cost(algo, x).map(|e| e.cost)
    }

    /// Smallest `t ≥ s` with `h(t) ≤ 0`.
    ///
    /// `h` falls by at most 2 per unit time, so a step of `h/2` cannot
    /// jump over its first root; near the root the scan walks in steps of
    /// at least `scan_step` and the bracket is then bisected.
    fn intercept(&self, partner: &Trajectory, exit: Point, s: f64, horizon: f64) -> Option<f64> {
        let h = |t: f64| gap_function(partner, exit, s, t);
        let mut lo = s;
        let mut h_lo = h(lo);
        if h_lo <= 0.0 {
            return Some(s);
        }
        let mut hi = loop {
            if lo >= horizon {
                return None;
            }
            let next = (lo + (0.5 * h_lo).max(self.config.scan_step)).min(horizon);
            let h_next = h(next);
            if h_next <= 0.0 {
                break next;
            }
            lo = next;
            h_lo = h_next;
        };
        while hi - lo > self.config.root_tol {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    /// Supremum of `C(x)` over the analysis span.
    ///
    /// Each piece is scanned on a uniform grid that includes the one-sided
    /// limits at both ends, and the best grid bracket is refined by
    /// golden-section search.
    pub fn worst_case(&self, algo: &EvacuationAlgorithm) -> Result<WorstCase> {
        let off = self.config.boundary_offset;
        let mut best: Option<WorstCase> = None;
        for (a, b) in algo.pieces() {
            let (lo, hi) = (a + off, b - off);
            if hi <= lo {
                continue;
            }
            let n = ((self.config.grid_density * (b - a)).ceil() as usize).max(16);
            let xs: Vec<f64> = (0..=n)
                .map(|i| lo + (hi - lo) * i as f64 / n as f64)
                .collect();
            let costs = xs
                .par_iter()
                .map(|&x| self.cost(algo, x))
                .collect::<Result<Vec<f64>>>()?;
            let (i, &grid_max) = costs
                .iter()
                .enumerate()
                .fold((0, &f64::NEG_INFINITY), |acc, (i, c)| {
                    if *c > *acc.1 {
                        (i, c)
                    } else {
                        acc
                    }
                });
            let left = xs[i.saturating_sub(1)];
            let right = xs[(i + 1).min(n)];
            let (mut x_star, mut c_star) = (xs[i], grid_max);
            if right > left {
                let (xr, cr) =
                    golden_max(|x| self.cost(algo, x), left, right, self.config.refine_tol)?;
                if cr > c_star {
                    x_star = xr;
                    c_star = cr;
                }
            }
            if best.is_none_or(|w| c_star > w.value) {
                best = Some(WorstCase {
                    value: c_star,
                    argmax_x: normalize_angle(x_star),
                });
            }
        }
        best.ok_or_else(|| EvacError::Infeasible(format!("{} has an empty span", algo.name())))
    }

    /// `(1/2π) ∫ C(x) dx`, integrated piecewise between breakpoints.
    pub fn average_case(&self, algo: &EvacuationAlgorithm) -> Result<f64> {
        let (span_lo, span_hi) = algo.analysis_span();
        let span = span_hi - span_lo;
        let off = self.config.boundary_offset;
        let parts: Vec<Result<f64>> = algo
            .pieces()
            .into_par_iter()
            .map(|(a, b)| {
                let (lo, hi) = (a + off, b - off);
                let cfg = SimpsonConfig {
                    tol: self.config.quadrature.tol * (b - a) / span,
                    ..self.config.quadrature
                };
                adaptive_simpson(|x| self.cost(algo, x.clamp(lo, hi)), a, b, cfg)
            })
            .collect();
        let mut total = CompensatedSum::default();
        let mut unresolved = 0.0;
        let mut first_error = None;
        for part in parts {
            match part {
                Ok(v) => total.add(v),
                Err(EvacError::Tolerance { partial, error }) => {
                    total.add(partial);
                    unresolved += error;
                }
                Err(e) => {
                    first_error.get_or_insert(e);
                }
            }
        }
        if let Some(e) = first_error {
            return Err(e);
        }
        let average = total.value() / span;
        if unresolved > 0.0 {
            return Err(EvacError::Tolerance {
                partial: average,
                error: unresolved / span,
            });
        }
        Ok(average)
    }

    /// `C(x)` on `n` midpoints of `[0, 2π)` plus both aggregates.
    pub fn profile(&self, algo: &EvacuationAlgorithm, n: usize) -> Result<CostProfile> {
        let samples = (0..n)
            .into_par_iter()
            .map(|i| self.evacuation_cost(algo, TAU * (i as f64 + 0.5) / n as f64))
            .collect::<Result<Vec<_>>>()?;
        let worst = self.worst_case(algo)?;
        Ok(CostProfile {
            samples,
            average: self.average_case(algo)?,
            worst: worst.value,
            argmax_x: worst.argmax_x,
        })
    }
}

fn gap_function(partner: &Trajectory, exit: Point, s: f64, t: f64) -> f64 {
    partner.locate(t).distance(exit) - (t - s)
}
