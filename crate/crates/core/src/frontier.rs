//! Worst-case budgets, guarantee curves and parameter sweeps.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{balanced_worst, build, constants, Family, FamilySpec, BETA_0};
use crate::engine::Engine;
use crate::error::{EvacError, Result};
use crate::geometry::{cycle, Point};
use crate::numeric::bisect;

/// Shift in the middle guarantee branch `u₂′(12.2812 − 2w)`.
pub const U2P_SHIFT: f64 = 12.2812;

const BUDGET_SLACK: f64 = 1e-12;

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * x + c)
}

/// Fitted average-case upper bounds and the exact worst-case curves of the
/// frontier families. Coefficients run from the highest power down.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuaranteeCurves {
    pub u1: [f64; 4],
    pub u2p: [f64; 4],
    pub u2: [f64; 3],
    /// Expanded form of `g` as printed for the three budget ranges.
    pub g_expanded: [[f64; 4]; 3],
}

impl Default for GuaranteeCurves {
    fn default() -> Self {
        Self {
            u1: [0.00889, -0.16944, 0.71518, 4.23089],
            u2p: [530.673, -78.5498, 7.36219, 4.70493],
            u2: [0.093056, 0.346659, 4.1719],
            g_expanded: [
                [-0.00889, 0.0248026, 0.338241, 3.88629],
                [-4245.38, 77893.3, -476397.0, 971235.0],
                [0.0, 0.093056, -1.70215, 11.6328],
            ],
        }
    }
}

/// Which family serves a worst-case budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    A1,
    A2p,
    A2,
}

impl GuaranteeCurves {
    pub fn u1(&self, alpha: f64) -> f64 {
        horner(&self.u1, alpha)
    }

    pub fn u2p(&self, beta: f64) -> f64 {
        horner(&self.u2p, beta)
    }

    pub fn u2(&self, alpha: f64) -> f64 {
        horner(&self.u2, alpha)
    }

    /// Worst case of `A1(α)` for `α < ᾱ` and of `A2(α)` for `α ≤ π − 2`.
    pub fn v(&self, alpha: f64) -> f64 {
        1.0 + TAU - alpha
    }

    pub fn v_inv(&self, w: f64) -> f64 {
        1.0 + TAU - w
    }

    /// Worst case of the balanced two-jump member.
    pub fn v2(&self, beta: f64) -> f64 {
        balanced_worst(beta)
    }

    /// Inverse of the strictly decreasing `v2` on `[0, 0.8]`.
    pub fn v2_inv(&self, w: f64) -> Result<f64> {
        let (hi_w, lo_w) = (self.v2(0.0), self.v2(0.8));
        if !(lo_w..=hi_w).contains(&w) {
            return Err(EvacError::Domain(format!(
                "v2 takes values in [{lo_w}, {hi_w}] on [0, 0.8], got {w}"
            )));
        }
        bisect(|b| self.v2(b) - w, 0.0, 0.8, 1e-15, 200)
    }

    pub fn branch(&self, w: f64) -> Result<Branch> {
        let c = constants();
        if !(c.w1 - BUDGET_SLACK..=c.w2 + BUDGET_SLACK).contains(&w) {
            return Err(EvacError::Domain(format!(
                "budget must lie in [{}, {}], got {w}",
                c.w1, c.w2
            )));
        }
        Ok(if w < frontier_constants().w_prime {
            Branch::A1
        } else if w < 3.0 + PI {
            Branch::A2p
        } else {
            Branch::A2
        })
    }

    /// Average-case guarantee for budget `w`, composed from the fitted bounds.
    pub fn g(&self, w: f64) -> Result<f64> {
        Ok(match self.branch(w)? {
            Branch::A1 => self.u1(self.v_inv(w)),
            Branch::A2p => self.u2p(U2P_SHIFT - 2.0 * w),
            Branch::A2 => self.u2(self.v_inv(w)),
        })
    }

    /// `g` through its printed expansion. The middle expansion cancels
    /// catastrophically and does not reproduce the composed form.
    pub fn g_expanded(&self, w: f64) -> Result<f64> {
        let i = match self.branch(w)? {
            Branch::A1 => 0,
            Branch::A2p => 1,
            Branch::A2 => 2,
        };
        Ok(horner(&self.g_expanded[i], w))
    }
}

/// Budget boundaries derived from the guarantee curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontierConstants {
    /// Budget where the `A1` and `A2p` guarantees cross.
    pub w_prime: f64,
    /// `1 + 2π − w′`.
    pub alpha_prime: f64,
    /// `12.2812 − 2w′`, the argument of `u₂′` at the crossing.
    pub beta_prime: f64,
    /// `v₂⁻¹(w′)`, the β actually run at the crossing.
    pub beta_at_w_prime: f64,
}

pub fn frontier_constants() -> &'static FrontierConstants {
    static CONSTANTS: OnceLock<FrontierConstants> = OnceLock::new();
    CONSTANTS.get_or_init(|| {
        let g = GuaranteeCurves::default();
        let w_prime = bisect(
            |w| g.u1(g.v_inv(w)) - g.u2p(U2P_SHIFT - 2.0 * w),
            6.12,
            6.14,
            1e-14,
            200,
        )
        .expect("guarantee curves cross in [6.12, 6.14]");
        FrontierConstants {
            w_prime,
            alpha_prime: g.v_inv(w_prime),
            beta_prime: U2P_SHIFT - 2.0 * w_prime,
            beta_at_w_prime: g.v2_inv(w_prime).expect("w′ lies in the range of v2"),
        }
    })
}

/// The algorithm chosen for a worst-case budget and its average guarantee.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierSolution {
    pub w: f64,
    pub branch: Branch,
    pub spec: FamilySpec,
    pub bound: f64,
}

pub fn solve_for_budget(w: f64) -> Result<FrontierSolution> {
    let g = GuaranteeCurves::default();
    let branch = g.branch(w)?;
    let c = constants();
    let w = w.clamp(c.w1, c.w2);
    let spec = match branch {
        Branch::A1 => FamilySpec::A1 { alpha: g.v_inv(w) },
        Branch::A2p => FamilySpec::balanced_a2p(g.v2_inv(w)?),
        Branch::A2 => FamilySpec::A2 {
            alpha: g.v_inv(w).max(0.0),
        },
    };
    Ok(FrontierSolution {
        w,
        branch,
        spec,
        bound: g.g(w)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficiencyPoint {
    pub spec: FamilySpec,
    pub average: f64,
    pub worst: f64,
}

impl EfficiencyPoint {
    pub fn family(&self) -> Family {
        self.spec.family()
    }
}

/// The guarantee a sweep point is compared against, with its signed slack.
///
/// For the frontier families `bound` is the fitted upper bound on the
/// average; for `A0` it is the benchmark average it must not beat. In both
/// cases `margin ≥ 0` means the claim holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontierRow {
    pub family: Family,
    pub param1: f64,
    pub param2: Vec<f64>,
    pub average: f64,
    pub worst: f64,
    pub bound: Option<f64>,
    pub margin: Option<f64>,
}

impl FrontierRow {
    pub fn new(point: &EfficiencyPoint, b1_average: f64) -> Self {
        let g = GuaranteeCurves::default();
        let (param1, param2, bound, margin) = match point.spec {
            FamilySpec::B1 | FamilySpec::B2 => (f64::NAN, vec![], None, None),
            FamilySpec::A0 { alpha, detour } => (
                alpha,
                vec![detour.x, detour.y],
                Some(b1_average),
                Some(point.average - b1_average),
            ),
            FamilySpec::A1 { alpha } => {
                let b = g.u1(alpha);
                (alpha, vec![], Some(b), Some(b - point.average))
            }
            FamilySpec::A2 { alpha } => {
                let b = g.u2(alpha);
                (alpha, vec![], Some(b), Some(b - point.average))
            }
            FamilySpec::A2p { alpha, beta } => {
                let b = g.u2p(beta);
                (alpha, vec![beta], Some(b), Some(b - point.average))
            }
        };
        Self {
            family: point.family(),
            param1,
            param2,
            average: point.average,
            worst: point.worst,
            bound,
            margin,
        }
    }
}

fn annotate(err: EvacError, spec: &FamilySpec) -> EvacError {
    match err {
        EvacError::Domain(m) => EvacError::Domain(format!("{spec}: {m}")),
        EvacError::Infeasible(m) => EvacError::Infeasible(format!("{spec}: {m}")),
        EvacError::Construction(m) => EvacError::Construction(format!("{spec}: {m}")),
        EvacError::Numeric(m) => EvacError::Numeric(format!("{spec}: {m}")),
        tol @ EvacError::Tolerance { .. } => tol,
    }
}

/// Evaluates every grid member; rows come back sorted by worst case, ties
/// kept in grid order.
pub fn sweep_family(engine: &Engine, grid: &[FamilySpec]) -> Result<Vec<EfficiencyPoint>> {
    let mut points = grid
        .par_iter()
        .map(|spec| {
            let eval = || -> Result<EfficiencyPoint> {
                let algo = build(spec)?;
                Ok(EfficiencyPoint {
                    spec: *spec,
                    average: engine.average_case(&algo)?,
                    worst: engine.worst_case(&algo)?.value,
                })
            };
            eval().map_err(|e| annotate(e, spec))
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|a, b| a.worst.total_cmp(&b.worst));
    Ok(points)
}

fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
    (0..n).map(move |i| if i + 1 == n && n > 1 { hi } else { lo + step * i as f64 })
}

/// Detour points on a polar grid: `radii` rings from the disk's edge
/// inwards, `angles` spokes each.
pub fn polar_grid(radii: usize, angles: usize) -> Vec<Point> {
    (1..=radii)
        .flat_map(|k| {
            let r = k as f64 / radii as f64;
            (0..angles).map(move |j| {
                let p = cycle(TAU * j as f64 / angles as f64);
                Point::new(r * p.x, r * p.y)
            })
        })
        .collect()
}

/// Evenly spaced members over the range where the family's guarantee is
/// stated. `A0` gets `n` values of α, each with a `m × m` polar grid of
/// detours where `m = max(2, round(√n))`.
pub fn default_grid(family: Family, n: usize) -> Vec<FamilySpec> {
    match family {
        Family::B1 => vec![FamilySpec::B1],
        Family::B2 => vec![FamilySpec::B2],
        Family::A1 => linspace(0.0, PI, n).map(|alpha| FamilySpec::A1 { alpha }).collect(),
        Family::A2 => linspace(0.0, PI - 2.0, n)
            .map(|alpha| FamilySpec::A2 { alpha })
            .collect(),
        Family::A2p => linspace(0.0, BETA_0, n).map(FamilySpec::balanced_a2p).collect(),
        Family::A0 => {
            let m = ((n as f64).sqrt().round() as usize).max(2);
            let detours = polar_grid(m, m);
            dominance_alphas(n)
                .flat_map(|alpha| {
                    detours
                        .iter()
                        .map(move |&detour| FamilySpec::A0 { alpha, detour })
                })
                .collect()
        }
    }
}

fn dominance_alphas(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| PI * i as f64 / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceReport {
    pub b1_average: f64,
    pub evaluated: usize,
    /// Smallest `avg(A0(α, B)) − avg(B1)` on the grid.
    pub min_margin: f64,
    pub argmin: FamilySpec,
    /// Largest `|avg(A0(t, cycle(t))) − avg(B1)|`.
    pub identity_gap: f64,
    pub passed: bool,
}

pub const DOMINANCE_TOL: f64 = 1e-4;
pub const IDENTITY_TOL: f64 = 1e-6;

/// Checks that no single detour improves on opposite-direction search.
pub fn verify_dominance_a0(
    engine: &Engine,
    alphas: usize,
    radii: usize,
    angles: usize,
) -> Result<DominanceReport> {
    let b1_average = engine.average_case(&build(&FamilySpec::B1)?)?;
    let detours = polar_grid(radii, angles);
    let grid: Vec<FamilySpec> = dominance_alphas(alphas)
        .flat_map(|alpha| {
            detours
                .iter()
                .map(move |&detour| FamilySpec::A0 { alpha, detour })
        })
        .collect();
    let average = |spec: &FamilySpec| -> Result<f64> {
        engine
            .average_case(&build(spec)?)
            .map_err(|e| annotate(e, spec))
    };
    let (argmin, min_average) = grid
        .par_iter()
        .map(|spec| Ok((*spec, average(spec)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| EvacError::Domain("empty dominance grid".into()))?;
    let identity_gap = (0..10)
        .into_par_iter()
        .map(|i| {
            let t = PI * (i as f64 + 0.5) / 10.0;
            Ok((average(&FamilySpec::A0 {
                alpha: t,
                detour: cycle(t),
            })? - b1_average)
                .abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let min_margin = min_average - b1_average;
    Ok(DominanceReport {
        b1_average,
        evaluated: grid.len(),
        min_margin,
        argmin,
        identity_gap,
        passed: min_margin >= -DOMINANCE_TOL && identity_gap <= IDENTITY_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuaranteeViolation {
    pub spec: FamilySpec,
    pub average: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuaranteeReport {
    pub checked: usize,
    /// Largest `average − bound` per family, in the order A1, A2p, A2.
    pub worst_excess: [(Family, f64); 3],
    pub violations: Vec<GuaranteeViolation>,
    pub g_decreasing: bool,
    pub passed: bool,
}

pub const GUARANTEE_TOL: f64 = 1e-3;

/// Compares engine averages with the fitted bounds on `n` points per
/// family, and checks that `g` strictly decreases on `g_points` budgets.
pub fn verify_guarantees(engine: &Engine, n: usize, g_points: usize) -> Result<GuaranteeReport> {
    let curves = GuaranteeCurves::default();
    let c = constants();
    let a1: Vec<FamilySpec> = linspace(1.0, c.alpha_bar, n)
        .map(|alpha| FamilySpec::A1 { alpha })
        .collect();
    let a2p: Vec<FamilySpec> = linspace(0.0, BETA_0, n).map(FamilySpec::balanced_a2p).collect();
    let a2: Vec<FamilySpec> = linspace(0.0, PI - 2.0, n)
        .map(|alpha| FamilySpec::A2 { alpha })
        .collect();
    let bound = |spec: &FamilySpec| match *spec {
        FamilySpec::A1 { alpha } => curves.u1(alpha),
        FamilySpec::A2p { beta, .. } => curves.u2p(beta),
        FamilySpec::A2 { alpha } => curves.u2(alpha),
        _ => unreachable!("only frontier families are checked"),
    };
    let mut worst_excess = [
        (Family::A1, f64::NEG_INFINITY),
        (Family::A2p, f64::NEG_INFINITY),
        (Family::A2, f64::NEG_INFINITY),
    ];
    let mut violations = Vec::new();
    for (slot, grid) in [a1, a2p, a2].iter().enumerate() {
        let averages = grid
            .par_iter()
            .map(|spec| {
                engine
                    .average_case(&build(spec)?)
                    .map_err(|e| annotate(e, spec))
            })
            .collect::<Result<Vec<f64>>>()?;
        for (spec, average) in grid.iter().zip(averages) {
            let b = bound(spec);
            worst_excess[slot].1 = worst_excess[slot].1.max(average - b);
            if average > b + GUARANTEE_TOL {
                violations.push(GuaranteeViolation {
                    spec: *spec,
                    average,
                    bound: b,
                });
            }
        }
    }
    let gs = linspace(c.w1, c.w2, g_points)
        .map(|w| curves.g(w))
        .collect::<Result<Vec<f64>>>()?;
    let g_decreasing = gs.windows(2).all(|p| p[1].partial_cmp(&p[0]) == Some(Ordering::Less));
    Ok(GuaranteeReport {
        checked: 3 * n,
        worst_excess,
        passed: violations.is_empty() && g_decreasing,
        violations,
        g_decreasing,
    })
}

/// Largest `|u₂′(12.2812 − 2w) − u₂′(v₂⁻¹(w))|` over `n` budgets in the
/// two-jump range, with the budget where it occurs.
pub fn shifted_argument_error(n: usize) -> Result<(f64, f64)> {
    let g = GuaranteeCurves::default();
    linspace(balanced_worst(BETA_0), 3.0 + PI, n)
        .map(|w| Ok(((g.u2p(U2P_SHIFT - 2.0 * w) - g.u2p(g.v2_inv(w)?)).abs(), w)))
        .try_fold((0.0, f64::NAN), |best: (f64, f64), r: Result<(f64, f64)>| {
            let r = r?;
            Ok(if r.0 > best.0 { r } else { best })
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn frontier_constants_match_tabulated_values() {
        let f = frontier_constants();
        assert_abs_diff_eq!(f.w_prime, 6.12851, epsilon = 1e-5);
        assert_abs_diff_eq!(f.alpha_prime, 1.15468, epsilon = 2e-5);
        assert_abs_diff_eq!(f.beta_prime, 0.0241653, epsilon = 1e-5);
    }

    #[test]
    fn budget_examples() {
        let s = solve_for_budget(3.0 + PI).unwrap();
        assert_eq!(s.branch, Branch::A2);
        match s.spec {
            FamilySpec::A2 { alpha } => assert_abs_diff_eq!(alpha, PI - 2.0, epsilon = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        let s = solve_for_budget(1.0 + TAU).unwrap();
        assert_eq!(s.spec, FamilySpec::A2 { alpha: 0.0 });
        let s = solve_for_budget(constants().w1).unwrap();
        match s.spec {
            FamilySpec::A1 { alpha } => assert_abs_diff_eq!(alpha, 1.54419, epsilon = 1e-4),
            other => panic!("unexpected {other:?}"),
        }
        let s = solve_for_budget(6.13).unwrap();
        assert_eq!(s.branch, Branch::A2p);
        let FamilySpec::A2p { beta, .. } = s.spec else { panic!() };
        assert_abs_diff_eq!(balanced_worst(beta), 6.13, epsilon = 1e-12);
    }

    #[test]
    fn budget_outside_range_is_rejected() {
        assert!(matches!(solve_for_budget(5.0), Err(EvacError::Domain(_))));
        assert!(matches!(solve_for_budget(7.3), Err(EvacError::Domain(_))));
    }

    #[test]
    fn guarantee_polynomial_examples() {
        let g = GuaranteeCurves::default();
        assert_abs_diff_eq!(g.u2(0.0), 4.1719);
        assert!(1.0 + PI <= g.u2(0.0));
        assert_abs_diff_eq!(g.u1(constants().alpha_bar), 4.96395, epsilon = 1e-5);
        assert_abs_diff_eq!(g.g(3.0 + PI).unwrap(), 4.689, epsilon = 1e-3);
        assert_abs_diff_eq!(g.g(3.0 + PI).unwrap(), g.u2(PI - 2.0), epsilon = 1e-12);
    }

    #[test]
    fn branches_meet_within_tolerance() {
        let g = GuaranteeCurves::default();
        let wp = frontier_constants().w_prime;
        let left = g.u1(g.v_inv(wp));
        let right = g.u2p(U2P_SHIFT - 2.0 * wp);
        assert!((left - right).abs() <= 1e-9);
        let mid = g.u2p(U2P_SHIFT - 2.0 * (3.0 + PI));
        let last = g.u2(PI - 2.0);
        assert!((mid - last).abs() <= 5e-3, "{mid} vs {last}");
    }

    #[test]
    fn outer_expansions_track_composed_form() {
        let g = GuaranteeCurves::default();
        let c = constants();
        for w in linspace(c.w1, frontier_constants().w_prime - 1e-9, 20) {
            assert_abs_diff_eq!(g.g_expanded(w).unwrap(), g.g(w).unwrap(), epsilon = 1e-4);
        }
        for w in linspace(3.0 + PI, c.w2, 20) {
            assert_abs_diff_eq!(g.g_expanded(w).unwrap(), g.g(w).unwrap(), epsilon = 1e-4);
        }
    }

    #[test]
    fn middle_expansion_is_unusable() {
        let g = GuaranteeCurves::default();
        let w = 6.13;
        let gap = (g.g_expanded(w).unwrap() - g.g(w).unwrap()).abs();
        assert!(gap > 1.0, "printed expansion unexpectedly agrees ({gap})");
    }

    #[test]
    fn v2_inverse_round_trips() {
        let g = GuaranteeCurves::default();
        for beta in linspace(0.0, BETA_0, 11) {
            assert_abs_diff_eq!(g.v2_inv(g.v2(beta)).unwrap(), beta, epsilon = 1e-12);
        }
        assert!(g.v2_inv(8.0).is_err());
    }

    #[test]
    fn polar_grid_stays_in_disk() {
        let pts = polar_grid(20, 20);
        assert_eq!(pts.len(), 400);
        assert!(pts.iter().all(|p| p.norm() <= 1.0 + 1e-15));
    }

    #[test]
    fn default_grids_respect_ranges() {
        for f in [Family::A1, Family::A2, Family::A2p] {
            let grid = default_grid(f, 9);
            assert_eq!(grid.len(), 9);
            assert!(grid.iter().all(|s| s.validate().is_ok()));
        }
        assert_eq!(default_grid(Family::A0, 4).len(), 4 * 4);
    }
}
