//! Points on the unit disk and piecewise unit-speed robot trajectories.
//!
//! A trajectory starts at the moment its robot reaches the perimeter; the
//! unit-time deployment from the centre is accounted for by the engine.
//! Each phase is either an arc of the unit circle or a straight chord, and
//! the robot stays put once the last phase is over.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{EvacError, Result};

/// Tolerance for "this point lies on the unit circle" and for phase continuity.
pub const EPS_CIRCLE: f64 = 1e-12;

/// Angular slack when hit-testing an exit against an arc.
pub const EPS_HIT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_on_circle(self) -> bool {
        (self.x * self.x + self.y * self.y - 1.0).abs() <= EPS_CIRCLE
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    /// Mirror image across the horizontal axis.
    pub fn reflect(self) -> Point {
        Point::new(self.x, -self.y)
    }

    fn lerp(self, other: Point, s: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * s,
            self.y + (other.y - self.y) * s,
        )
    }
}

/// The point `(cos θ, sin θ)` on the unit circle.
pub fn cycle(theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(c, s)
}

/// Reduce an angle to `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Smallest non-negative `s` with `from + s ≡ to (mod 2π)`.
fn ccw_gap(from: f64, to: f64) -> f64 {
    normalize_angle(to - from)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Ccw,
    Cw,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Ccw => 1.0,
            Direction::Cw => -1.0,
        }
    }

    fn flip(self) -> Self {
        match self {
            Direction::Ccw => Direction::Cw,
            Direction::Cw => Direction::Ccw,
        }
    }
}

/// Unit-speed motion along the perimeter: position `cycle(σt + b)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcPhase {
    pub start_angle: f64,
    pub direction: Direction,
    pub duration: f64,
}

impl ArcPhase {
    pub fn new(start_angle: f64, direction: Direction, duration: f64) -> Self {
        Self {
            start_angle,
            direction,
            duration,
        }
    }

    pub fn ccw(start_angle: f64, duration: f64) -> Self {
        Self::new(start_angle, Direction::Ccw, duration)
    }

    pub fn cw(start_angle: f64, duration: f64) -> Self {
        Self::new(start_angle, Direction::Cw, duration)
    }

    /// Unnormalised angle at local time `t`.
    pub fn angle_at(&self, t: f64) -> f64 {
        self.start_angle + self.direction.sign() * t
    }

    pub fn end_angle(&self) -> f64 {
        self.angle_at(self.duration)
    }

    /// Local time at which the arc first passes through `theta`, if it does.
    fn first_hit(&self, theta: f64) -> Option<f64> {
        let mut s = match self.direction {
            Direction::Ccw => ccw_gap(self.start_angle, theta),
            Direction::Cw => ccw_gap(theta, self.start_angle),
        };
        if s > TAU - EPS_HIT {
            s = 0.0;
        }
        (s <= self.duration + EPS_HIT).then(|| s.min(self.duration))
    }
}

/// Unit-speed motion along the segment from `from` to `to`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChordPhase {
    pub from: Point,
    pub to: Point,
    pub duration: f64,
}

impl ChordPhase {
    /// Chord whose duration is its Euclidean length.
    pub fn new(from: Point, to: Point) -> Self {
        Self {
            from,
            to,
            duration: from.distance(to),
        }
    }

    /// Chord with a tabulated duration, which must match the segment length.
    pub fn with_duration(from: Point, to: Point, duration: f64) -> Result<Self> {
        let length = from.distance(to);
        if (length - duration).abs() > EPS_CIRCLE.max(4.0 * f64::EPSILON * length) {
            return Err(EvacError::Construction(format!(
                "chord duration {duration} does not match its length {length}"
            )));
        }
        Ok(Self { from, to, duration })
    }

    pub fn position(&self, t: f64) -> Point {
        if self.duration <= 0.0 {
            return self.from;
        }
        self.from.lerp(self.to, (t / self.duration).clamp(0.0, 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Phase {
    Arc(ArcPhase),
    Chord(ChordPhase),
}

impl Phase {
    pub fn duration(&self) -> f64 {
        match self {
            Phase::Arc(a) => a.duration,
            Phase::Chord(c) => c.duration,
        }
    }

    pub fn position(&self, t: f64) -> Point {
        match self {
            Phase::Arc(a) => cycle(a.angle_at(t.clamp(0.0, a.duration))),
            Phase::Chord(c) => c.position(t),
        }
    }

    pub fn start_point(&self) -> Point {
        self.position(0.0)
    }

    pub fn end_point(&self) -> Point {
        self.position(self.duration())
    }

    fn reflected(&self) -> Phase {
        match *self {
            Phase::Arc(a) => Phase::Arc(ArcPhase::new(
                -a.start_angle,
                a.direction.flip(),
                a.duration,
            )),
            Phase::Chord(c) => Phase::Chord(ChordPhase {
                from: c.from.reflect(),
                to: c.to.reflect(),
                duration: c.duration,
            }),
        }
    }
}

impl From<ArcPhase> for Phase {
    fn from(a: ArcPhase) -> Self {
        Phase::Arc(a)
    }
}

impl From<ChordPhase> for Phase {
    fn from(c: ChordPhase) -> Self {
        Phase::Chord(c)
    }
}

/// Ordered, continuous list of phases for one robot.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    phases: Vec<Phase>,
    #[serde(skip)]
    starts: Vec<f64>,
    total: f64,
}

impl Trajectory {
    /// Validates durations and continuity between consecutive phases.
    pub fn new(phases: Vec<Phase>) -> Result<Self> {
        if phases.is_empty() {
            return Err(EvacError::Construction("trajectory has no phases".into()));
        }
        for (i, p) in phases.iter().enumerate() {
            let d = p.duration();
            if !d.is_finite() || d < 0.0 {
                return Err(EvacError::Construction(format!(
                    "phase {} has invalid duration {d}",
                    i + 1
                )));
            }
            let start = p.start_point();
            if !start.x.is_finite() || !start.y.is_finite() || start.norm() > 1.0 + EPS_CIRCLE {
                return Err(EvacError::Construction(format!(
                    "phase {} starts outside the unit disk",
                    i + 1
                )));
            }
        }
        for (i, pair) in phases.windows(2).enumerate() {
            let gap = pair[0].end_point().distance(pair[1].start_point());
            if gap > EPS_CIRCLE {
                return Err(EvacError::Construction(format!(
                    "phases {} and {} are discontinuous (gap {gap:e})",
                    i + 1,
                    i + 2
                )));
            }
        }
        let mut starts = Vec::with_capacity(phases.len());
        let mut clock = 0.0;
        for p in &phases {
            starts.push(clock);
            clock += p.duration();
        }
        Ok(Self {
            phases,
            starts,
            total: clock,
        })
    }

    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    /// Time at which the robot finishes its last phase and stays idle.
    pub fn total_duration(&self) -> f64 {
        self.total
    }

    pub fn start_point(&self) -> Point {
        self.phases[0].start_point()
    }

    pub fn end_point(&self) -> Point {
        self.phases[self.phases.len() - 1].end_point()
    }

    pub fn position_at(&self, t: f64) -> Result<Point> {
        if !(t >= 0.0) {
            return Err(EvacError::Domain(format!(
                "trajectory time must be non-negative, got {t}"
            )));
        }
        Ok(self.locate(t))
    }

    /// Position for `t >= 0`; negative times clamp to the start.
    pub(crate) fn locate(&self, t: f64) -> Point {
        if t >= self.total {
            return self.end_point();
        }
        // phases are few (at most four), a linear scan beats a binary search
        let mut idx = 0;
        for (i, &s) in self.starts.iter().enumerate() {
            if s <= t {
                idx = i;
            } else {
                break;
            }
        }
        self.phases[idx].position(t - self.starts[idx])
    }

    /// Earliest time this robot stands on `cycle(theta)`.
    ///
    /// Arcs are tested by angle-interval membership. Chords only discover
    /// the exit at endpoints that lie on the circle.
    pub fn first_visit(&self, theta: f64) -> Option<f64> {
        let target = normalize_angle(theta);
        let matches = |p: Point| {
            if !p.is_on_circle() {
                return false;
            }
            let d = ccw_gap(p.angle(), target);
            d.min(TAU - d) <= EPS_HIT
        };
        for (p, &start) in self.phases.iter().zip(&self.starts) {
            match p {
                Phase::Arc(a) => {
                    if let Some(s) = a.first_hit(target) {
                        return Some(start + s);
                    }
                }
                Phase::Chord(c) => {
                    if matches(c.from) {
                        return Some(start);
                    }
                    if matches(c.to) {
                        return Some(start + c.duration);
                    }
                }
            }
        }
        None
    }

    /// Arcs of the circle (as `(start, length)` with start in `[0, 2π)`)
    /// swept by this trajectory.
    pub fn swept_arcs(&self) -> Vec<(f64, f64)> {
        self.phases
            .iter()
            .filter_map(|p| match p {
                Phase::Arc(a) if a.duration > 0.0 => {
                    let lo = match a.direction {
                        Direction::Ccw => a.start_angle,
                        Direction::Cw => a.end_angle(),
                    };
                    Some((normalize_angle(lo), a.duration))
                }
                _ => None,
            })
            .collect()
    }

    /// Mirror image of the whole trajectory across the horizontal axis.
    pub fn reflected(&self) -> Trajectory {
        Trajectory {
            phases: self.phases.iter().map(Phase::reflected).collect(),
            starts: self.starts.clone(),
            total: self.total,
        }
    }
}

/// Largest uncovered gap of `[0, 2π)` left by a set of arcs.
pub(crate) fn largest_coverage_gap(arcs: &[(f64, f64)]) -> f64 {
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for &(lo, len) in arcs {
        if len >= TAU {
            return 0.0;
        }
        let hi = lo + len;
        if hi > TAU {
            intervals.push((lo, TAU));
            intervals.push((0.0, hi - TAU));
        } else {
            intervals.push((lo, hi));
        }
    }
    intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut reach = 0.0_f64;
    let mut gap = 0.0_f64;
    for (lo, hi) in intervals {
        gap = gap.max(lo - reach);
        reach = reach.max(hi);
    }
    gap.max(TAU - reach)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn sweep_ccw(duration: f64) -> Trajectory {
        Trajectory::new(vec![ArcPhase::ccw(0.0, duration).into()]).unwrap()
    }

    #[test]
    fn arc_position_quarter_turn() {
        let p = sweep_ccw(PI).position_at(FRAC_PI_2).unwrap();
        assert_abs_diff_eq!(p.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.y, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn negative_time_is_rejected() {
        assert!(matches!(
            sweep_ccw(1.0).position_at(-1e-3),
            Err(EvacError::Domain(_))
        ));
    }

    #[test]
    fn position_is_frozen_after_the_last_phase() {
        let t = sweep_ccw(1.0);
        assert_eq!(t.position_at(5.0).unwrap(), cycle(1.0));
    }

    #[test]
    fn discontinuous_phases_are_rejected() {
        let err = Trajectory::new(vec![
            ArcPhase::ccw(0.0, 1.0).into(),
            ArcPhase::ccw(1.1, 1.0).into(),
        ])
        .unwrap_err();
        assert!(matches!(err, EvacError::Construction(_)));
    }

    #[test]
    fn chord_duration_must_match_length() {
        assert!(ChordPhase::with_duration(cycle(0.0), cycle(PI), 2.0).is_ok());
        assert!(ChordPhase::with_duration(cycle(0.0), cycle(PI), 1.9).is_err());
    }

    #[test]
    fn chord_interior_never_discovers() {
        let t = Trajectory::new(vec![
            ArcPhase::ccw(0.0, 1.0).into(),
            ChordPhase::new(cycle(1.0), cycle(3.0)).into(),
        ])
        .unwrap();
        assert!(t.first_visit(2.0).is_none());
        assert_abs_diff_eq!(t.first_visit(0.5).unwrap(), 0.5);
        // endpoint on the circle counts as a visit
        let reach = 1.0 + cycle(1.0).distance(cycle(3.0));
        assert_abs_diff_eq!(t.first_visit(3.0).unwrap(), reach, epsilon = 1e-12);
    }

    #[test]
    fn clockwise_arc_first_visit() {
        let t = Trajectory::new(vec![ArcPhase::cw(0.0, PI).into()]).unwrap();
        assert_abs_diff_eq!(t.first_visit(TAU - 1.0).unwrap(), 1.0, epsilon = 1e-12);
        assert!(t.first_visit(1.0).is_none());
        assert_eq!(t.first_visit(0.0), Some(0.0));
    }

    #[test]
    fn just_behind_the_start_is_not_visited() {
        let t = Trajectory::new(vec![ArcPhase::ccw(1.0, 2.0).into()]).unwrap();
        assert!(t.first_visit(1.0 - 1e-9).is_none());
        assert_eq!(t.first_visit(1.0), Some(0.0));
    }

    #[test]
    fn reflection_mirrors_positions() {
        let t = Trajectory::new(vec![
            ArcPhase::ccw(0.0, 1.0).into(),
            ChordPhase::new(cycle(1.0), Point::new(0.2, 0.1)).into(),
        ])
        .unwrap();
        let r = t.reflected();
        for &s in &[0.0, 0.5, 1.0, 1.3, 2.5] {
            let a = t.position_at(s).unwrap();
            let b = r.position_at(s).unwrap();
            assert_abs_diff_eq!(a.x, b.x, epsilon = 1e-15);
            assert_abs_diff_eq!(a.y, -b.y, epsilon = 1e-15);
        }
    }

    #[test]
    fn coverage_gap_detection() {
        assert_abs_diff_eq!(largest_coverage_gap(&[(0.0, TAU)]), 0.0);
        assert_abs_diff_eq!(largest_coverage_gap(&[(0.0, PI), (PI, PI)]), 0.0);
        assert_abs_diff_eq!(
            largest_coverage_gap(&[(5.0, 2.0), (0.0, 1.0)]),
            5.0 - 1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn normalize_handles_tiny_negatives() {
        let r = normalize_angle(-1e-300);
        assert!((0.0..TAU).contains(&r));
    }
}
