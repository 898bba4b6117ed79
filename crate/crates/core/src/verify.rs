//! The acceptance suite: each check recomputes a published quantity with the
//! engine and compares it at a fixed tolerance.

use std::f64::consts::{PI, TAU};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::algorithms::{
    alpha_beta, beta_feasibility, build, closed_form_worst, constants, zeta, FamilySpec, BETA_0,
};
use crate::delta::delta;
use crate::engine::{Engine, EvacuationAlgorithm};
use crate::error::Result;
use crate::geometry::{cycle, EPS_CIRCLE};
use crate::frontier::{
    frontier_constants, shifted_argument_error, solve_for_budget, verify_dominance_a0,
    verify_guarantees, GuaranteeCurves, U2P_SHIFT,
};

/// Grid sizes; quick mode divides each by four.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteSize {
    pub delta_samples: usize,
    pub closed_form_params: usize,
    pub dominance_alphas: usize,
    pub dominance_radii: usize,
    pub dominance_angles: usize,
    pub guarantee_points: usize,
    pub g_points: usize,
    pub budgets: usize,
    pub unimodal_step: f64,
    pub coincidence_points: usize,
}

impl SuiteSize {
    pub fn full() -> Self {
        Self {
            delta_samples: 10_000,
            closed_form_params: 50,
            dominance_alphas: 40,
            dominance_radii: 20,
            dominance_angles: 20,
            guarantee_points: 50,
            g_points: 200,
            budgets: 100,
            unimodal_step: 1e-3,
            coincidence_points: 1000,
        }
    }

    /// Every grid four times coarser; the dominance grid loses a factor two
    /// in each detour direction.
    pub fn quick() -> Self {
        let f = Self::full();
        Self {
            delta_samples: f.delta_samples / 4,
            closed_form_params: f.closed_form_params.div_ceil(4),
            dominance_alphas: f.dominance_alphas / 4,
            dominance_radii: f.dominance_radii / 2,
            dominance_angles: f.dominance_angles / 2,
            guarantee_points: f.guarantee_points.div_ceil(4),
            g_points: f.g_points / 4,
            budgets: f.budgets / 4,
            unimodal_step: f.unimodal_step * 4.0,
            coincidence_points: f.coincidence_points / 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{:>2}] {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

/// A quantity reported next to the suite without gating it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub name: &'static str,
    pub value: f64,
    pub limit: f64,
    pub holds: bool,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "note {}: {:.6e} (limit {:.1e}, {})",
            self.name,
            self.value,
            self.limit,
            if self.holds { "holds" } else { "exceeded" }
        )
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn midpoints(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
        .collect()
}

fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

type Check = fn(&Engine, &SuiteSize) -> Result<(bool, String)>;

pub const CRITERIA: [(u8, &str, Check); 11] = [
    (1, "worst case of B1", b1_worst),
    (2, "average case of B1", b1_average),
    (3, "B2 exactness", b2_exact),
    (4, "catch-time solver", delta_checks),
    (5, "closed forms vs engine", closed_forms),
    (6, "beta_0 root and w_0", beta_root),
    (7, "detour dominance", dominance),
    (8, "guarantee inequalities", guarantees),
    (9, "budget consistency", budget_consistency),
    (10, "B1 cost unimodality", b1_unimodal),
    (11, "family coincidences", coincidences),
];

fn b1_worst(engine: &Engine, _: &SuiteSize) -> Result<(bool, String)> {
    let w = engine.worst_case(&build(&FamilySpec::B1)?)?;
    Ok((
        within(w.value, 5.73906, 1e-4) && within(w.argmax_x, 0.96782, 1e-3),
        format!("worst {:.7} at x = {:.6}", w.value, w.argmax_x),
    ))
}

fn b1_average(engine: &Engine, _: &SuiteSize) -> Result<(bool, String)> {
    let a = engine.average_case(&build(&FamilySpec::B1)?)?;
    Ok((within(a, 5.1172, 1e-3), format!("average {a:.7}")))
}

fn b2_exact(engine: &Engine, _: &SuiteSize) -> Result<(bool, String)> {
    let algo = build(&FamilySpec::B2)?;
    let a = engine.average_case(&algo)?;
    let w = engine.worst_case(&algo)?.value;
    Ok((
        within(a, 1.0 + PI, 1e-6) && within(w, 1.0 + TAU, 1e-6),
        format!(
            "average - (1+π) = {:.2e}, worst - (1+2π) = {:.2e}",
            a - 1.0 - PI,
            w - 1.0 - TAU
        ),
    ))
}

fn delta_checks(_: &Engine, size: &SuiteSize) -> Result<(bool, String)> {
    let two = delta((PI - 2.0) / 2.0)?;
    let zero = delta(PI)?;
    let residual = linspace(0.0, PI, size.delta_samples)
        .into_iter()
        .map(|x| delta(x).map(|d| (2.0 * (x + 0.5 * d).sin() - d).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok((
        within(two, 2.0, 1e-9) && within(zero, 0.0, 1e-12) && residual <= 1e-10,
        format!(
            "δ((π−2)/2) − 2 = {:.1e}, δ(π) = {:.1e}, max residual {:.1e} over {} samples",
            two - 2.0,
            zero,
            residual,
            size.delta_samples
        ),
    ))
}

fn closed_forms(engine: &Engine, size: &SuiteSize) -> Result<(bool, String)> {
    let n = size.closed_form_params;
    let specs: Vec<FamilySpec> = linspace(0.0, PI, n)
        .into_iter()
        .map(|alpha| FamilySpec::A1 { alpha })
        .chain(
            linspace(0.0, PI - 2.0, n)
                .into_iter()
                .map(|alpha| FamilySpec::A2 { alpha }),
        )
        .chain(
            linspace(0.0, BETA_0, n)
                .into_iter()
                .map(FamilySpec::balanced_a2p),
        )
        .collect();
    let diffs = specs
        .par_iter()
        .map(|s| Ok((engine.worst_case(&build(s)?)?.value - closed_form_worst(s)?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    let (i, worst) = diffs
        .iter()
        .copied()
        .enumerate()
        .fold((0, 0.0), |b, (i, d)| if d > b.1 { (i, d) } else { b });
    Ok((
        worst <= 1e-4,
        format!(
            "max |engine − closed form| = {worst:.2e} over {} members (at {})",
            specs.len(),
            specs[i]
        ),
    ))
}

fn beta_root(_: &Engine, _: &SuiteSize) -> Result<(bool, String)> {
    let lo = beta_feasibility(0.0438)?;
    let hi = beta_feasibility(0.0439)?;
    let w0 = closed_form_worst(&FamilySpec::balanced_a2p(BETA_0))?;
    Ok((
        lo > 0.0 && hi < 0.0 && within(w0, 6.11953, 1e-4),
        format!(
            "feasibility {lo:.3e} at 0.0438, {hi:.3e} at 0.0439, root {:.9}, w0 = {w0:.7}",
            constants().beta_0_root
        ),
    ))
}

fn dominance(engine: &Engine, size: &SuiteSize) -> Result<(bool, String)> {
    let r = verify_dominance_a0(
        engine,
        size.dominance_alphas,
        size.dominance_radii,
        size.dominance_angles,
    )?;
    Ok((
        r.passed,
        format!(
            "min avg(A0) − avg(B1) = {:.3e} over {} members (at {}), identity gap {:.1e}",
            r.min_margin, r.evaluated, r.argmin, r.identity_gap
        ),
    ))
}

fn guarantees(engine: &Engine, size: &SuiteSize) -> Result<(bool, String)> {
    let r = verify_guarantees(engine, size.guarantee_points, size.g_points)?;
    let excess: Vec<String> = r
        .worst_excess
        .iter()
        .map(|(f, e)| format!("{f} {e:+.2e}"))
        .collect();
    Ok((
        r.passed,
        format!(
            "max avg − bound: {}; {} violations; g decreasing: {}",
            excess.join(", "),
            r.violations.len(),
            r.g_decreasing
        ),
    ))
}

fn budget_consistency(engine: &Engine, size: &SuiteSize) -> Result<(bool, String)> {
    let c = constants();
    let g = GuaranteeCurves::default();
    // uniform budgets plus one sample per branch boundary and one inside the
    // narrow two-jump range, so every branch is exercised at any grid size
    let wp = frontier_constants().w_prime;
    let w3 = 3.0 + PI;
    let mut budgets = linspace(c.w1, c.w2, size.budgets.saturating_sub(3).max(2));
    budgets.extend([wp, 0.5 * (wp + w3), w3]);
    budgets.sort_by(f64::total_cmp);
    let rows = budgets
        .par_iter()
        .map(|&w| {
            let s = solve_for_budget(w)?;
            let algo = build(&s.spec)?;
            Ok((
                w,
                engine.worst_case(&algo)?.value,
                engine.average_case(&algo)?,
                s.bound,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_err = rows.iter().map(|r| (r.1 - r.0).abs()).fold(0.0, f64::max);
    let (excess, at) = rows
        .iter()
        .map(|r| (r.2 - r.3, r.0))
        .fold((f64::NEG_INFINITY, f64::NAN), |b, e| if e.0 > b.0 { e } else { b });
    let gs = budgets.iter().map(|&w| g.g(w)).collect::<Result<Vec<f64>>>()?;
    let decreasing = gs.windows(2).all(|p| p[1] < p[0]);
    let mismatch_wp = (g.u1(g.v_inv(wp)) - g.u2p(U2P_SHIFT - 2.0 * wp)).abs();
    let mismatch_w3 = (g.u2p(U2P_SHIFT - 2.0 * w3) - g.u2(g.v_inv(w3))).abs();
    let passed = worst_err <= 1e-4
        && excess <= 1e-3
        && decreasing
        && mismatch_wp <= 5e-3
        && mismatch_w3 <= 5e-3;
    Ok((
        passed,
        format!(
            "max |worst − w| = {worst_err:.1e}; max avg − g(w) = {excess:+.2e} at w = {at:.6}; \
             g decreasing: {decreasing}; branch gaps {mismatch_wp:.1e} at w′, {mismatch_w3:.1e} at 3+π"
        ),
    ))
}

fn b1_unimodal(engine: &Engine, size: &SuiteSize) -> Result<(bool, String)> {
    let algo = build(&FamilySpec::B1)?;
    let a0 = constants().alpha_0;
    let n = (PI / size.unimodal_step).floor() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| i as f64 * size.unimodal_step).collect();
    let cs = xs
        .par_iter()
        .map(|&x| engine.cost(&algo, x))
        .collect::<Result<Vec<f64>>>()?;
    let mut worst_drop = 0.0f64;
    let mut worst_rise = 0.0f64;
    for (i, p) in cs.windows(2).enumerate() {
        let d = p[1] - p[0];
        if xs[i + 1] <= a0 {
            worst_drop = worst_drop.min(d);
        } else if xs[i] >= a0 {
            worst_rise = worst_rise.max(d);
        }
    }
    Ok((
        worst_drop >= -1e-9 && worst_rise <= 1e-9,
        format!(
            "{} grid points; largest decrease before α0 {:.1e}, largest increase after {:.1e}",
            xs.len(),
            (-worst_drop).max(0.0),
            worst_rise
        ),
    ))
}

fn pointwise_gap(
    engine: &Engine,
    a: &EvacuationAlgorithm,
    b: &EvacuationAlgorithm,
    n: usize,
) -> Result<f64> {
    let gaps = midpoints(0.0, TAU, n)
        .par_iter()
        .map(|&x| Ok((engine.cost(a, x)? - engine.cost(b, x)?).abs()))
        .collect::<Result<Vec<f64>>>()?;
    Ok(gaps.into_iter().fold(0.0, f64::max))
}

fn coincidences(engine: &Engine, size: &SuiteSize) -> Result<(bool, String)> {
    let n = size.coincidence_points;
    let pairs = [
        (FamilySpec::A1 { alpha: PI }, FamilySpec::B1),
        (FamilySpec::A2 { alpha: 0.0 }, FamilySpec::B2),
        (
            FamilySpec::A2p { alpha: 0.7, beta: 0.0 },
            FamilySpec::A2 { alpha: 0.7 },
        ),
        (
            FamilySpec::A2p { alpha: PI - 2.0, beta: 0.0 },
            FamilySpec::A2 { alpha: PI - 2.0 },
        ),
    ];
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for (a, b) in pairs {
        let gap = pointwise_gap(engine, &build(&a)?, &build(&b)?, n)?;
        worst = worst.max(gap);
        parts.push(format!("{a}≡{b} {gap:.1e}"));
    }
    Ok((worst <= 1e-9, format!("max |ΔC| on {n} points: {}", parts.join(", "))))
}

/// Runs every criterion. A criterion whose computation fails is reported
/// as failed with the error.
pub fn run_all(engine: &Engine, size: &SuiteSize) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|&(id, name, check)| match check(engine, size) {
            Ok((passed, detail)) => CriterionResult {
                id,
                name,
                passed,
                detail,
            },
            Err(e) => CriterionResult {
                id,
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}

/// Checks that do not gate the suite.
pub fn diagnostics() -> Result<Vec<Diagnostic>> {
    let (shift, _) = shifted_argument_error(200)?;
    let g = GuaranteeCurves::default();
    let w = 0.5 * (frontier_constants().w_prime + 3.0 + PI);
    let expansion = (g.g_expanded(w)? - g.g(w)?).abs();
    let a = alpha_beta(BETA_0);
    let z = zeta(a, BETA_0)?;
    let d2 = delta(0.5 * BETA_0)?;
    let offset = cycle(z + d2).distance(cycle(z + BETA_0 + d2));
    let retargeted = !build(&FamilySpec::balanced_a2p(BETA_0))?.notes().is_empty();
    Ok(vec![
        Diagnostic {
            name: "two-jump tabulated second landing vs next arc start at beta_0 (retargeted)",
            value: offset,
            limit: EPS_CIRCLE,
            holds: !retargeted,
        },
        Diagnostic {
            name: "|u2p(12.2812 − 2w) − u2p(v2⁻¹(w))| on the two-jump range",
            value: shift,
            limit: 2e-3,
            holds: shift <= 2e-3,
        },
        Diagnostic {
            name: "printed middle expansion of g vs composed form, mid-branch",
            value: expansion,
            limit: 5e-3,
            holds: expansion <= 5e-3,
        },
    ])
}
