use std::f64::consts::{PI, TAU};

use evac_core::algorithms::{build, constants, FamilySpec};
use evac_core::engine::{Engine, EngineConfig};
use evac_core::geometry::{cycle, Point};
use proptest::prelude::*;

fn any_spec() -> impl Strategy<Value = FamilySpec> {
    let gamma_0 = constants().gamma_0;
    prop_oneof![
        Just(FamilySpec::B1),
        Just(FamilySpec::B2),
        (0.0..=PI).prop_map(|alpha| FamilySpec::A1 { alpha }),
        (0.0..=gamma_0).prop_map(|alpha| FamilySpec::A2 { alpha }),
        (0.0..1.2f64, 0.0..0.3f64)
            .prop_map(|(alpha, beta)| FamilySpec::A2p { alpha, beta })
            .prop_filter("two jumps fit in the circle", |s| s.validate().is_ok()),
        (0.0..=PI, 0.0..=1.0f64, 0.0..TAU).prop_map(|(alpha, r, phi)| {
            let p = cycle(phi);
            FamilySpec::A0 {
                alpha,
                detour: Point::new(r * p.x, r * p.y),
            }
        }),
    ]
}

proptest! {
    #[test]
    fn robots_move_at_unit_speed(spec in any_spec(), t1 in 0.0..8.0f64, t2 in 0.0..8.0f64) {
        let algo = build(&spec).unwrap();
        for i in 0..2 {
            let r = algo.robot(i);
            let d = r.position_at(t1).unwrap().distance(r.position_at(t2).unwrap());
            prop_assert!(d <= (t1 - t2).abs() + 1e-12);
            prop_assert!(r.position_at(t1).unwrap().norm() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn cost_decomposes_into_search_and_catch(spec in any_spec(), x in 0.0..TAU) {
        let algo = build(&spec).unwrap();
        let engine = Engine::default();
        let e = engine.evacuation_cost(&algo, x).unwrap();
        prop_assert!(e.catch >= -1e-12);
        prop_assert!((e.cost - (1.0 + e.search + 2.0 * e.catch)).abs() <= 1e-12);
        prop_assert!(engine.h(&algo, x, e.search).unwrap() >= -1e-12);
        prop_assert!(engine.h(&algo, x, e.search + e.catch).unwrap().abs() <= 1e-9);
        prop_assert!((e.meet - e.search - e.catch).abs() <= 1e-12);
    }

    #[test]
    fn root_is_stable_under_finer_scan(spec in any_spec(), x in 0.0..TAU) {
        let algo = build(&spec).unwrap();
        let coarse = Engine::default();
        let fine = Engine::new(EngineConfig { scan_step: 0.5e-4, ..EngineConfig::default() });
        let a = coarse.cost(&algo, x).unwrap();
        let b = fine.cost(&algo, x).unwrap();
        prop_assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn worst_case_dominates_average(spec in any_spec()) {
        let algo = build(&spec).unwrap();
        let engine = Engine::default();
        let w = engine.worst_case(&algo).unwrap();
        let a = engine.average_case(&algo).unwrap();
        prop_assert!(w.value >= a);
        prop_assert!((engine.cost(&algo, w.argmax_x).unwrap() - w.value).abs() <= 1e-9);
    }
}

#[test]
fn worst_case_decreases_along_each_family() {
    let engine = Engine::default();
    let c = constants();
    let worst = |s: FamilySpec| engine.worst_case(&build(&s).unwrap()).unwrap().value;
    let series: [Vec<f64>; 3] = [
        (0..12)
            .map(|i| worst(FamilySpec::A1 { alpha: c.alpha_bar * i as f64 / 12.0 }))
            .collect(),
        (0..=12)
            .map(|i| worst(FamilySpec::A2 { alpha: (PI - 2.0) * i as f64 / 12.0 }))
            .collect(),
        (0..=12)
            .map(|i| worst(FamilySpec::balanced_a2p(0.0438855 * i as f64 / 12.0)))
            .collect(),
    ];
    for s in &series {
        assert!(s.windows(2).all(|p| p[1] < p[0]), "{s:?}");
    }
}

#[test]
fn b1_cost_matches_closed_form_on_1000_points() {
    let algo = build(&FamilySpec::B1).unwrap();
    let engine = Engine::default();
    for i in 0..1000 {
        let x = PI * (i as f64 + 0.5) / 1000.0;
        let closed = 1.0 + x + 2.0 * evac_core::delta(x).unwrap();
        assert!((engine.cost(&algo, x).unwrap() - closed).abs() <= 1e-7);
        // mirror placement costs the same
        assert!((engine.cost(&algo, TAU - x).unwrap() - closed).abs() <= 1e-7);
    }
}

#[test]
fn tighter_quadrature_does_not_move_the_average() {
    let algo = build(&FamilySpec::A1 { alpha: 1.2 }).unwrap();
    let a = Engine::default().average_case(&algo).unwrap();
    let mut cfg = EngineConfig::default();
    cfg.quadrature.tol = 1e-9;
    let b = Engine::new(cfg).average_case(&algo).unwrap();
    assert!((a - b).abs() <= 1e-6, "{a} vs {b}");
}
