//! The algorithm families: two benchmarks, the one-detour family, and the
//! three parameterised families that trace the efficient frontier, together
//! with the closed-form worst cases known for them.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::delta::delta;
use crate::engine::{EvacuationAlgorithm, Symmetry};
use crate::error::{EvacError, Result};
use crate::geometry::{cycle, ArcPhase, ChordPhase, Phase, Point, Trajectory, EPS_CIRCLE};
use crate::numeric::{bisect, golden_max};

/// Largest β for which the balanced two-jump algorithm keeps its closed-form
/// worst case.
pub const BETA_0: f64 = 0.043_885_5;

const PARAM_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    B1,
    B2,
    A0,
    A1,
    A2,
    A2p,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::B1,
        Family::B2,
        Family::A0,
        Family::A1,
        Family::A2,
        Family::A2p,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::B1 => "B1",
            Family::B2 => "B2",
            Family::A0 => "A0",
            Family::A1 => "A1",
            Family::A2 => "A2",
            Family::A2p => "A2p",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = EvacError;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| EvacError::Domain(format!("unknown algorithm family `{s}`")))
    }
}

/// A family member with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FamilySpec {
    /// Robots search in opposite directions.
    B1,
    /// Robots search together.
    B2,
    /// `B1` with a chord excursion to interior point `detour` after angle `alpha`.
    A0 { alpha: f64, detour: Point },
    A1 { alpha: f64 },
    A2 { alpha: f64 },
    A2p { alpha: f64, beta: f64 },
}

impl FamilySpec {
    pub fn family(&self) -> Family {
        match self {
            FamilySpec::B1 => Family::B1,
            FamilySpec::B2 => Family::B2,
            FamilySpec::A0 { .. } => Family::A0,
            FamilySpec::A1 { .. } => Family::A1,
            FamilySpec::A2 { .. } => Family::A2,
            FamilySpec::A2p { .. } => Family::A2p,
        }
    }

    /// The two-jump member whose two worst placements cost the same.
    pub fn balanced_a2p(beta: f64) -> Self {
        FamilySpec::A2p {
            alpha: alpha_beta(beta),
            beta,
        }
    }

    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            FamilySpec::B1 | FamilySpec::B2 => vec![],
            FamilySpec::A0 { alpha, detour } => {
                vec![("alpha", alpha), ("bx", detour.x), ("by", detour.y)]
            }
            FamilySpec::A1 { alpha } | FamilySpec::A2 { alpha } => vec![("alpha", alpha)],
            FamilySpec::A2p { alpha, beta } => vec![("alpha", alpha), ("beta", beta)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(EvacError::Construction(msg));
        let finite = self.params().iter().all(|(_, v)| v.is_finite());
        if !finite {
            return bad(format!("{} parameters must be finite", self.family()));
        }
        match *self {
            FamilySpec::B1 | FamilySpec::B2 => Ok(()),
            FamilySpec::A0 { alpha, detour } => {
                if !(0.0..=PI).contains(&alpha) {
                    return bad(format!("A0 needs alpha in [0, π], got {alpha}"));
                }
                if detour.norm() > 1.0 + EPS_CIRCLE {
                    return bad(format!("A0 detour point {detour:?} lies outside the disk"));
                }
                Ok(())
            }
            FamilySpec::A1 { alpha } => {
                if !(0.0..=PI).contains(&alpha) {
                    return bad(format!("A1 needs alpha in [0, π], got {alpha}"));
                }
                Ok(())
            }
            FamilySpec::A2 { alpha } => {
                let g0 = constants().gamma_0;
                if !(0.0..=g0 + PARAM_SLACK).contains(&alpha) {
                    return bad(format!("A2 needs alpha in [0, {g0}], got {alpha}"));
                }
                Ok(())
            }
            FamilySpec::A2p { alpha, beta } => {
                if alpha < 0.0 || beta < 0.0 || alpha + beta > TAU {
                    return bad(format!("A2p needs non-negative alpha, beta, got ({alpha}, {beta})"));
                }
                let span = two_jump_span(alpha, beta)?;
                if span > TAU + PARAM_SLACK {
                    return bad(format!(
                        "A2p({alpha}, {beta}) jumps past the full circle (2α+2β+δ+δ' = {span})"
                    ));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family())?;
        let params = self.params();
        if !params.is_empty() {
            let body: Vec<String> = params.iter().map(|(n, v)| format!("{n}={v}")).collect();
            write!(f, "({})", body.join(", "))?;
        }
        Ok(())
    }
}

/// `2α + β + δ((α+β)/2)`: where the first jumper of the two-jump family lands.
pub fn zeta(alpha: f64, beta: f64) -> Result<f64> {
    Ok(2.0 * alpha + beta + delta(0.5 * (alpha + beta))?)
}

/// `π − β/2 − 2cos(β/4)`: the α balancing the two candidate worst cases.
pub fn alpha_beta(beta: f64) -> f64 {
    PI - 0.5 * beta - 2.0 * (0.25 * beta).cos()
}

/// Closed-form worst case of the balanced two-jump algorithm.
pub fn balanced_worst(beta: f64) -> f64 {
    1.0 + PI - 0.5 * beta + 2.0 * (0.25 * beta).cos()
}

fn two_jump_span(alpha: f64, beta: f64) -> Result<f64> {
    Ok(2.0 * alpha + 2.0 * beta + delta(0.5 * (alpha + beta))? + delta(0.5 * beta)?)
}

/// Catch-up time of the first jump of the balanced member, from its
/// implicit form `d = 2cos(cos(β/4) − β/4 − d/2)`.
pub fn balanced_first_catch(beta: f64) -> Result<f64> {
    let c = (0.25 * beta).cos() - 0.25 * beta;
    bisect(|d| 2.0 * (c - 0.5 * d).cos() - d, 0.0, TAU, 1e-13, 200)
}

/// `4cos(β/4) − β − δ″ − 2δ′`; non-negative exactly when the balanced
/// member's closed-form worst case holds.
pub fn beta_feasibility(beta: f64) -> Result<f64> {
    if !(0.0..=0.8).contains(&beta) {
        return Err(EvacError::Domain(format!(
            "beta feasibility is tabulated on [0, 0.8], got {beta}"
        )));
    }
    let d2 = balanced_first_catch(beta)?;
    let d1 = delta(0.5 * beta)?;
    Ok(4.0 * (0.25 * beta).cos() - beta - d2 - 2.0 * d1)
}

/// Constants derived once from the delta solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants {
    /// Worst exit of `B1`.
    pub alpha_0: f64,
    /// `wrs(B1)`.
    pub w1: f64,
    /// `1 + 2π − w1`.
    pub alpha_bar: f64,
    /// Root of `2α + δ(α/2) = 2π`.
    pub gamma_0: f64,
    /// Root of the β feasibility expression.
    pub beta_0_root: f64,
    /// Worst case of the balanced two-jump member at `BETA_0`.
    pub w0: f64,
    /// `wrs(B2) = 1 + 2π`.
    pub w2: f64,
}

pub fn constants() -> &'static Constants {
    static CONSTANTS: OnceLock<Constants> = OnceLock::new();
    CONSTANTS.get_or_init(|| Constants::derive().expect("derived constants"))
}

impl Constants {
    fn derive() -> Result<Self> {
        let (alpha_0, w1) = golden_max(
            |x| Ok(1.0 + x + 2.0 * delta(x)?),
            0.5,
            1.5,
            1e-12,
        )?;
        let gamma_0 = bisect(
            |a| 2.0 * a + delta(0.5 * a).unwrap_or(f64::NAN) - TAU,
            0.0,
            PI,
            1e-13,
            200,
        )?;
        let beta_0_root = bisect(
            |b| beta_feasibility(b).unwrap_or(f64::NAN),
            0.0,
            0.8,
            1e-13,
            200,
        )?;
        Ok(Self {
            alpha_0,
            w1,
            alpha_bar: 1.0 + TAU - w1,
            gamma_0,
            beta_0_root,
            w0: balanced_worst(BETA_0),
            w2: 1.0 + TAU,
        })
    }
}

fn tail(duration: f64) -> Result<f64> {
    if duration < -PARAM_SLACK {
        return Err(EvacError::Construction(format!(
            "negative phase duration {duration}"
        )));
    }
    Ok(duration.max(0.0))
}

fn chord(from: Point, to: Point, duration: f64) -> Result<Phase> {
    Ok(ChordPhase::with_duration(from, to, duration)?.into())
}

/// Builds the trajectories of a family member.
pub fn build(spec: &FamilySpec) -> Result<EvacuationAlgorithm> {
    spec.validate()?;
    let algo = match *spec {
        FamilySpec::B1 => {
            let r1 = Trajectory::new(vec![ArcPhase::ccw(0.0, PI).into()])?;
            let r2 = r1.reflected();
            EvacuationAlgorithm::new("B1", r1, r2)?.with_symmetry(Symmetry::Mirror)
        }
        FamilySpec::B2 => {
            let r = Trajectory::new(vec![ArcPhase::ccw(0.0, TAU).into()])?;
            EvacuationAlgorithm::new("B2", r.clone(), r)?
        }
        FamilySpec::A0 { alpha, detour } => {
            let pivot = cycle(alpha);
            let r1 = Trajectory::new(vec![
                ArcPhase::ccw(0.0, alpha).into(),
                ChordPhase::new(pivot, detour).into(),
                ChordPhase::new(detour, pivot).into(),
                ArcPhase::ccw(alpha, PI - alpha).into(),
            ])?;
            let r2 = r1.reflected();
            EvacuationAlgorithm::new("A0", r1, r2)?
                .with_symmetry(Symmetry::Mirror)
                .with_breakpoints([alpha])
        }
        FamilySpec::A1 { alpha } => {
            let d = delta(alpha)?;
            let landing = -alpha - d;
            let r1 = Trajectory::new(vec![
                ArcPhase::ccw(0.0, alpha).into(),
                chord(cycle(alpha), cycle(landing), d)?,
                ArcPhase::cw(landing, tail(TAU - 2.0 * alpha - d)?).into(),
            ])?;
            let r2 = Trajectory::new(vec![ArcPhase::cw(0.0, TAU - alpha).into()])?;
            EvacuationAlgorithm::new("A1", r1, r2)?.with_breakpoints([
                alpha,
                TAU + landing,
                TAU - alpha,
            ])
        }
        FamilySpec::A2 { alpha } => {
            let d = delta(0.5 * alpha)?;
            let landing = 2.0 * alpha + d;
            let r1 = Trajectory::new(vec![
                ArcPhase::ccw(0.0, alpha).into(),
                chord(cycle(alpha), cycle(landing), d)?,
                ArcPhase::ccw(landing, tail(TAU - landing)?).into(),
            ])?;
            let r2 = Trajectory::new(vec![ArcPhase::ccw(alpha, TAU - alpha).into()])?;
            EvacuationAlgorithm::new("A2", r1, r2)?.with_breakpoints([
                alpha,
                2.0 * alpha,
                landing,
            ])
        }
        FamilySpec::A2p { alpha, beta } => build_two_jump(alpha, beta)?,
    };
    Ok(spec
        .params()
        .into_iter()
        .fold(algo, |a, (name, value)| a.with_param(name, value)))
}

fn build_two_jump(alpha: f64, beta: f64) -> Result<EvacuationAlgorithm> {
    let d_first = delta(0.5 * (alpha + beta))?;
    let d_second = delta(0.5 * beta)?;
    let z = 2.0 * alpha + beta + d_first;
    let r1 = Trajectory::new(vec![
        ArcPhase::ccw(0.0, alpha).into(),
        chord(cycle(alpha), cycle(z), d_first)?,
        ArcPhase::ccw(z, tail(TAU - z)?).into(),
    ])?;

    // The tabulated second jump ends at cycle(ζ + δ(β/2)) while the
    // following arc starts at ζ + β + δ(β/2). Keep the table when the two
    // agree; otherwise land where the arc starts, which gives the chord its
    // tabulated length δ(β/2).
    let resume = z + beta + d_second;
    let tabulated = ChordPhase::new(cycle(z), cycle(z + d_second));
    let tabulated_fits = (tabulated.duration - d_second).abs() <= EPS_CIRCLE
        && tabulated.to.distance(cycle(resume)) <= EPS_CIRCLE;
    let mut note = None;
    let second_jump = if tabulated_fits {
        chord(cycle(z), cycle(z + d_second), d_second)?
    } else {
        note = Some(format!(
            "A2p({alpha}, {beta}): second jump retargeted from cycle(ζ+δ(β/2)) to \
             cycle(ζ+β+δ(β/2)); tabulated endpoint is {:.3e} away from the next arc and \
             its chord length differs from δ(β/2) by {:.3e}",
            tabulated.to.distance(cycle(resume)),
            (tabulated.duration - d_second).abs()
        ));
        chord(cycle(z), cycle(resume), d_second)?
    };
    let r2 = Trajectory::new(vec![
        ArcPhase::ccw(alpha, alpha + beta + d_first).into(),
        second_jump,
        ArcPhase::ccw(resume, tail(TAU - resume)?).into(),
    ])?;

    // after the second jump the robots must stand together
    let meet = alpha + beta + d_first + d_second;
    let gap = r1.locate(meet).distance(r2.locate(meet));
    if gap > 1e-9 {
        return Err(EvacError::Construction(format!(
            "A2p({alpha}, {beta}): robots miss each other after the second jump by {gap:e}"
        )));
    }

    let mut algo = EvacuationAlgorithm::new("A2p", r1, r2)?.with_breakpoints([
        alpha,
        2.0 * alpha,
        2.0 * alpha + d_first,
        z,
        z + beta,
        resume,
    ]);
    if let Some(n) = note {
        algo = algo.with_note(n);
    }
    Ok(algo)
}

/// Worst case from the closed forms, where one is known.
pub fn closed_form_worst(spec: &FamilySpec) -> Result<f64> {
    let c = constants();
    match *spec {
        FamilySpec::B1 => Ok(c.w1),
        FamilySpec::B2 => Ok(c.w2),
        FamilySpec::A0 { .. } => Err(EvacError::Domain(
            "A0 has no closed-form worst case".into(),
        )),
        FamilySpec::A1 { alpha } => {
            if !(0.0..=PI).contains(&alpha) {
                return Err(EvacError::Domain(format!("A1 closed form needs alpha in [0, π], got {alpha}")));
            }
            Ok(if alpha < c.alpha_bar { 1.0 + TAU - alpha } else { c.w1 })
        }
        FamilySpec::A2 { alpha } => {
            if !(0.0..=PI - 2.0 + PARAM_SLACK).contains(&alpha) {
                return Err(EvacError::Domain(format!(
                    "A2 closed form needs alpha in [0, π − 2], got {alpha}"
                )));
            }
            Ok(1.0 + TAU - alpha)
        }
        FamilySpec::A2p { alpha, beta } => {
            if !(0.0..=BETA_0).contains(&beta) {
                return Err(EvacError::Domain(format!(
                    "A2p closed form needs beta in [0, {BETA_0}], got {beta}"
                )));
            }
            if (alpha - alpha_beta(beta)).abs() > 1e-9 {
                return Err(EvacError::Domain(format!(
                    "A2p closed form needs alpha = π − β/2 − 2cos(β/4) = {}, got {alpha}",
                    alpha_beta(beta)
                )));
            }
            Ok(balanced_worst(beta))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Engine, Founder};
    use approx::assert_abs_diff_eq;

    /// First time a robot comes within `tol` of `cycle(x)`, by stepping
    /// through time.
    fn scan_first_visit(t: &Trajectory, x: f64, step: f64, tol: f64) -> Option<f64> {
        let target = cycle(x);
        let n = (t.total_duration() / step).ceil() as usize;
        (0..=n)
            .map(|i| i as f64 * step)
            .find(|&s| t.position_at(s).unwrap().distance(target) <= tol)
    }

    #[test]
    fn a1_chord_lands_on_the_partner() {
        let algo = build(&FamilySpec::A1 { alpha: 1.0 }).unwrap();
        let d = delta(1.0).unwrap();
        let p = algo.robot(0).position_at(1.0 + d).unwrap();
        let q = cycle(-1.0 - d);
        assert_abs_diff_eq!(p.x, q.x, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, q.y, epsilon = 1e-12);
        let r2 = algo.robot(1).position_at(1.0 + d).unwrap();
        assert!(r2.distance(q) < 1e-12);
    }

    #[test]
    fn trajectories_start_where_the_first_phase_starts() {
        for spec in [
            FamilySpec::B1,
            FamilySpec::A1 { alpha: 0.4 },
            FamilySpec::A2 { alpha: 0.7 },
        ] {
            let algo = build(&spec).unwrap();
            assert_eq!(algo.robot(0).position_at(0.0).unwrap(), algo.robot(0).start_point());
        }
        let b1 = build(&FamilySpec::B1).unwrap();
        let top = b1.robot(0).position_at(PI / 2.0).unwrap();
        assert_abs_diff_eq!(top.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(top.y, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn first_visit_examples() {
        let b2 = build(&FamilySpec::B2).unwrap();
        let d = b2.first_visit_time(1.0).unwrap();
        assert_abs_diff_eq!(d.time, 1.0);
        assert_eq!(d.founder, Founder::Both);

        let b1 = build(&FamilySpec::B1).unwrap();
        let d = b1.first_visit_time(1.0).unwrap();
        assert_abs_diff_eq!(d.time, 1.0);
        assert_eq!(d.founder, Founder::Robot1);
        assert_eq!(b1.first_visit_time(PI).unwrap().founder, Founder::Both);

        let a2 = build(&FamilySpec::A2 { alpha: 0.5 }).unwrap();
        let d = a2.first_visit_time(0.2).unwrap();
        let r1 = scan_first_visit(a2.robot(0), 0.2, 1e-6, 1e-6).unwrap();
        // robot 2 sweeps [α, 2π] and never reaches 0.2
        assert!(scan_first_visit(a2.robot(1), 0.2, 1e-6, 1e-6).is_none());
        assert_eq!(d.founder, Founder::Robot1);
        assert_abs_diff_eq!(d.time, r1, epsilon = 2e-6);
        assert_abs_diff_eq!(d.time, 0.2, epsilon = 1e-12);
    }

    #[test]
    fn brute_force_first_visits_agree() {
        let algo = build(&FamilySpec::A2p {
            alpha: 1.0,
            beta: 0.03,
        })
        .unwrap();
        for &x in &[0.3, 1.5, 3.2, 3.27, 4.0, 6.0] {
            let found = algo.first_visit_time(x).unwrap();
            let scanned = [0, 1]
                .iter()
                .filter_map(|&i| scan_first_visit(algo.robot(i), x, 1e-5, 1e-5))
                .fold(f64::INFINITY, f64::min);
            assert_abs_diff_eq!(found.time, scanned, epsilon = 2e-5);
        }
    }

    #[test]
    fn gamma_0_matches_tabulated_value() {
        let g = constants().gamma_0;
        assert_abs_diff_eq!(g, 2.2412, epsilon = 1e-3);
        assert_abs_diff_eq!(2.0 * g + delta(0.5 * g).unwrap(), TAU, epsilon = 1e-10);
    }

    #[test]
    fn b1_constants() {
        let c = constants();
        assert_abs_diff_eq!(c.w1, 5.73906, epsilon = 1e-5);
        assert_abs_diff_eq!(c.alpha_0, 0.96782, epsilon = 1e-5);
        assert_abs_diff_eq!(c.alpha_bar, 1.544_125, epsilon = 1e-5);
    }

    #[test]
    fn closed_form_examples() {
        assert_abs_diff_eq!(
            closed_form_worst(&FamilySpec::A1 { alpha: 1.0 }).unwrap(),
            TAU,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            closed_form_worst(&FamilySpec::balanced_a2p(BETA_0)).unwrap(),
            6.11953,
            epsilon = 1e-5
        );
        assert_abs_diff_eq!(
            closed_form_worst(&FamilySpec::balanced_a2p(0.0)).unwrap(),
            3.0 + PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            closed_form_worst(&FamilySpec::A1 { alpha: 3.0 }).unwrap(),
            constants().w1
        );
    }

    #[test]
    fn closed_form_rejects_out_of_range() {
        assert!(closed_form_worst(&FamilySpec::A2 { alpha: 1.5 }).is_err());
        assert!(closed_form_worst(&FamilySpec::balanced_a2p(0.05)).is_err());
        assert!(closed_form_worst(&FamilySpec::A2p { alpha: 1.0, beta: 0.01 }).is_err());
        assert!(closed_form_worst(&FamilySpec::A0 {
            alpha: 1.0,
            detour: Point::ORIGIN
        })
        .is_err());
    }

    #[test]
    fn beta_feasibility_examples() {
        assert_abs_diff_eq!(beta_feasibility(0.0).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(beta_feasibility(BETA_0).unwrap(), 0.0, epsilon = 1e-4);
        assert!(beta_feasibility(0.5).unwrap() < 0.0);
        assert!(beta_feasibility(0.9).is_err());
        assert_abs_diff_eq!(constants().beta_0_root, BETA_0, epsilon = 1e-7);
    }

    #[test]
    fn implicit_catch_matches_delta() {
        for i in 0..=20 {
            let beta = 0.8 * i as f64 / 20.0;
            let direct = delta(0.5 * (alpha_beta(beta) + beta)).unwrap();
            assert_abs_diff_eq!(balanced_first_catch(beta).unwrap(), direct, epsilon = 1e-11);
        }
    }

    #[test]
    fn last_interval_dominates_second_jump_at_beta_0() {
        let alpha = alpha_beta(BETA_0);
        let d2 = delta(0.5 * BETA_0).unwrap();
        assert_abs_diff_eq!(d2, 0.977997, epsilon = 1e-5);
        let last = TAU - two_jump_span(alpha, BETA_0).unwrap();
        // the last interval exceeds the second catch time by exactly the
        // feasibility margin
        assert_abs_diff_eq!(last - d2, beta_feasibility(BETA_0).unwrap(), epsilon = 1e-11);
        assert!(d2 <= last);
        assert_abs_diff_eq!(last, 0.977997, epsilon = 1e-5);
    }

    #[test]
    fn two_jump_table_is_retargeted_for_positive_beta() {
        let algo = build(&FamilySpec::balanced_a2p(0.02)).unwrap();
        assert_eq!(algo.notes().len(), 1);
        let flat = build(&FamilySpec::A2p { alpha: 1.0, beta: 0.0 }).unwrap();
        assert!(flat.notes().is_empty());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(build(&FamilySpec::A1 { alpha: -0.1 }).is_err());
        assert!(build(&FamilySpec::A2 { alpha: 2.5 }).is_err());
        assert!(build(&FamilySpec::A2p { alpha: 2.0, beta: 1.0 }).is_err());
        assert!(build(&FamilySpec::A0 {
            alpha: 1.0,
            detour: Point::new(0.9, 0.9)
        })
        .is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("A3".parse::<Family>().is_err());
    }

    #[test]
    fn b1_matches_closed_form_catch() {
        let algo = build(&FamilySpec::B1).unwrap();
        let engine = Engine::default();
        for i in 1..1000 {
            let x = PI * i as f64 / 1000.0;
            let e = engine.evacuation_cost(&algo, x).unwrap();
            assert_abs_diff_eq!(e.catch, delta(x).unwrap(), epsilon = 1e-8);
            assert_abs_diff_eq!(e.cost, 1.0 + x + 2.0 * delta(x).unwrap(), epsilon = 1e-7);
        }
    }
}
