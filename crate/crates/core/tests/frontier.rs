use std::f64::consts::{PI, TAU};

use evac_core::algorithms::{build, constants, FamilySpec};
use evac_core::frontier::{
    frontier_constants, solve_for_budget, sweep_family, verify_dominance_a0, Branch,
    FrontierRow, GuaranteeCurves,
};
use evac_core::geometry::Point;
use evac_core::Engine;

#[test]
fn a2_sweep_endpoints() {
    let engine = Engine::default();
    let pts = sweep_family(
        &engine,
        &[FamilySpec::A2 { alpha: PI - 2.0 }, FamilySpec::A2 { alpha: 0.0 }],
    )
    .unwrap();
    assert!(pts[0].worst < pts[1].worst);
    assert!((pts[0].worst - (3.0 + PI)).abs() <= 1e-6);
    let u2 = GuaranteeCurves::default().u2(PI - 2.0);
    assert!(pts[0].average < u2 && u2 - pts[0].average < 2e-2);
    assert!((pts[1].average - (1.0 + PI)).abs() <= 1e-6);
    assert!((pts[1].worst - (1.0 + TAU)).abs() <= 1e-6);
}

#[test]
fn a1_at_pi_is_the_benchmark_point() {
    let pts = sweep_family(&Engine::default(), &[FamilySpec::A1 { alpha: PI }]).unwrap();
    assert!((pts[0].average - 5.1172).abs() <= 1e-3);
    assert!((pts[0].worst - 5.73906).abs() <= 1e-4);
}

#[test]
fn flat_two_jump_matches_a2_point() {
    let engine = Engine::default();
    let a = &sweep_family(&engine, &[FamilySpec::balanced_a2p(0.0)]).unwrap()[0];
    let b = &sweep_family(&engine, &[FamilySpec::A2 { alpha: PI - 2.0 }]).unwrap()[0];
    assert!((a.average - b.average).abs() <= 1e-6);
    assert!((a.worst - b.worst).abs() <= 1e-6);
}

#[test]
fn sweep_errors_name_the_member() {
    let err = sweep_family(&Engine::default(), &[FamilySpec::A2 { alpha: 3.0 }]).unwrap_err();
    assert!(err.to_string().contains("A2(alpha=3)"), "{err}");
}

#[test]
fn rows_carry_signed_margins() {
    let engine = Engine::default();
    let b1 = engine.average_case(&build(&FamilySpec::B1).unwrap()).unwrap();
    let pts = sweep_family(
        &engine,
        &[
            FamilySpec::A1 { alpha: 1.2 },
            FamilySpec::A0 { alpha: 0.0, detour: Point::new(0.05, 0.0) },
        ],
    )
    .unwrap();
    for p in &pts {
        let row = FrontierRow::new(p, b1);
        assert!(row.margin.unwrap() >= 0.0, "{row:?}");
    }
}

#[test]
fn solutions_meet_across_branch_boundaries() {
    let engine = Engine::default();
    let avg = |w: f64| {
        let s = solve_for_budget(w).unwrap();
        (s.branch, engine.average_case(&build(&s.spec).unwrap()).unwrap())
    };
    for (w, left, right) in [
        (frontier_constants().w_prime, Branch::A1, Branch::A2p),
        (3.0 + PI, Branch::A2p, Branch::A2),
    ] {
        let (bl, al) = avg(w - 1e-7);
        let (br, ar) = avg(w + 1e-7);
        assert_eq!((bl, br), (left, right));
        assert!((al - ar).abs() <= 5e-3, "{al} vs {ar} at {w}");
    }
}

#[test]
fn budget_is_met_exactly() {
    let engine = Engine::default();
    let c = constants();
    for i in 0..12 {
        let w = c.w1 + (c.w2 - c.w1) * i as f64 / 11.0;
        let s = solve_for_budget(w).unwrap();
        let worst = engine.worst_case(&build(&s.spec).unwrap()).unwrap().value;
        assert!((worst - w).abs() <= 1e-4, "{w}: {worst}");
    }
}

#[test]
fn small_dominance_grid() {
    let r = verify_dominance_a0(&Engine::default(), 4, 3, 4).unwrap();
    assert_eq!(r.evaluated, 4 * 3 * 4);
    assert!(r.passed, "{r:?}");
    assert!(r.identity_gap <= 1e-6);
}
