use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use stieltjes_core::contour::{
    build_contour, h, lemma_bounds, p2_fourier, p2_integral, path_nodes, s_k_contour, s_k_real_axis, saddle,
    PhaseContext, SegmentKind, LEVEL_TOL,
};

fn ctx(k: u32, alpha: f64, a: f64) -> PhaseContext {
    PhaseContext::new(k, alpha, a).unwrap()
}

#[test]
fn reference_saddles() {
    let w1 = saddle(&ctx(1, 200.0, 1.0)).unwrap();
    assert!((w1 - Complex64::new(2.46, 1.14)).norm() < 0.01, "{w1}");
    let w40 = saddle(&ctx(40, 200.0, 1.0)).unwrap();
    assert!((w40 - Complex64::new(0.29, 0.52)).norm() < 0.01, "{w40}");
}

#[test]
fn contour_matches_real_axis_integral() {
    for k in [1u32, 2, 5] {
        for alpha in [3.0, 7.0, 15.0] {
            let c = ctx(k, alpha, 1.0);
            let contour = s_k_contour(&c).unwrap().s_k;
            let direct = s_k_real_axis(&c, 400.0, 4).unwrap();
            let rel = (contour - direct).norm() / direct.norm();
            assert!(rel <= 1e-6, "k = {k}, alpha = {alpha}: {rel:e}");
        }
    }
}

#[test]
fn segment_lemmas_hold_on_the_grid() {
    for k in [1u32, 2, 5, 40] {
        for alpha in [2.0 * PI, 10.0, 50.0, 200.0] {
            for a in [0.1, 1.0] {
                let d = s_k_contour(&ctx(k, alpha, a)).unwrap();
                let tag = format!("k = {k}, alpha = {alpha}, a = {a}");
                assert!(d.l1.norm() < d.bound_l1, "{tag}: L1");
                assert!(d.l2.norm() <= d.bound_l2, "{tag}: L2");
                assert!(d.l3.norm() <= d.bound_l3, "{tag}: L3");
                assert!(d.l4.norm() <= d.bound_l4, "{tag}: L4");
                assert!(d.s_k.norm() <= d.s_bound, "{tag}: S");
                let sum = d.l1 + d.l2 + d.l3 + d.l4;
                assert!((sum - d.s_k).norm() <= 1e-12 * d.s_k.norm().max(1.0), "{tag}");
                let checks = &d.path.checks;
                assert!(checks.max_level_error <= 100.0 * LEVEL_TOL, "{tag}");
                assert!(checks.box_contained && checks.tail_negative, "{tag}");
            }
        }
    }
}

#[test]
fn lemma_bound_formulas() {
    let alpha: f64 = 10.0;
    let b = lemma_bounds(&ctx(1, alpha, 1.0)).unwrap();
    let poly = alpha * alpha + 2.0 * alpha + 2.0;
    assert!((b.l1 - (alpha + 3.0 + 1.0 / PI)).abs() < 1e-12);
    assert!((b.l2 - poly * PI / 2.0).abs() < 1e-12 * poly);
    assert!((b.l4 - poly).abs() < 1e-12 * poly);
    let w = saddle(&ctx(1, alpha, 1.0)).unwrap();
    let peak = (-alpha / w + alpha * w.ln()).re.exp();
    let diag = (4.0 * alpha.ln().powi(2) + PI * PI / 4.0).sqrt();
    assert!((b.l3 - peak * poly * diag).abs() < 1e-12 * b.l3);
}

#[test]
fn outside_and_inside_shapes() {
    let outside = build_contour(&ctx(1, 200.0, 1.0)).unwrap();
    assert!(!outside.saddle_inside);
    assert!((outside.u.norm() - 1.0).abs() < 1e-10);
    assert_eq!(outside.checks.re_h_turns, 1);
    let inside = build_contour(&ctx(40, 200.0, 1.0)).unwrap();
    assert!(inside.saddle_inside);
    assert_eq!(inside.checks.re_h_turns, 0);
    for path in [&outside, &inside] {
        let first = path.segments.first().unwrap();
        assert_eq!(first.kind, SegmentKind::RealAxis);
        assert_eq!(path.segments.last().unwrap().kind, SegmentKind::Tail);
    }
}

#[test]
fn node_dump_stays_on_the_level() {
    let path = build_contour(&ctx(2, 50.0, 1.0)).unwrap();
    let rows = path_nodes(&path).unwrap();
    assert!(!rows.is_empty());
    for r in rows.iter().filter(|r| r.kind == SegmentKind::LevelLine) {
        assert!((r.h.im - path.level).abs() <= 100.0 * LEVEL_TOL);
    }
}

#[test]
fn fourier_series_of_second_periodic_bernoulli() {
    // ∫ B₂({x}) f'' = (1/π²) Σ Re S_k / k², truncated with a k⁻² tail
    let alpha = 5.0;
    let direct = p2_integral(alpha, 1.0).unwrap();
    let kmax = 200;
    let series = p2_fourier(alpha, 1.0, kmax).unwrap();
    let sup = s_k_contour(&ctx(1, alpha, 1.0)).unwrap().s_k.norm();
    let tail = sup / (PI * PI * kmax as f64);
    assert!((series - direct.value).abs() <= tail + direct.err, "{series} vs {}", direct.value);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn saddle_is_critical(k in 1u32..60, alpha in 1.0f64..400.0) {
        let c = ctx(k, alpha, 1.0);
        let w = saddle(&c).unwrap();
        let step = 1e-5;
        let dh = (h(&c, w + step).unwrap() - h(&c, w - step).unwrap()) / (2.0 * step);
        let scale = (h(&c, w).unwrap().norm() / w.norm()).max(1.0);
        prop_assert!(dh.norm() <= 1e-6 * scale);
    }

    #[test]
    fn lemma_bounds_hold(k in 1u32..50, alpha in 6.3f64..300.0, a in 0.05f64..=1.0) {
        let d = s_k_contour(&ctx(k, alpha, a)).unwrap();
        prop_assert!(d.l1.norm() < d.bound_l1);
        prop_assert!(d.l2.norm() <= d.bound_l2);
        prop_assert!(d.l3.norm() <= d.bound_l3);
        prop_assert!(d.l4.norm() <= d.bound_l4);
        prop_assert!(d.s_k.norm() <= d.s_bound);
    }
}
