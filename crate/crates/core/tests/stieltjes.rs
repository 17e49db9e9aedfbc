use proptest::prelude::*;
use stieltjes_core::stieltjes::{
    c_alpha, deriv_coeffs, f_deriv, gamma_alpha, hurwitz_zeta, periodic_integral, tail_integral, EmConfig,
};

/// `Σ_{r≤N} f(r) − log^{α+1}(N+a)/(α+1) − f(N)/2` at `N` and `2N`, combined
/// to cancel the leading `N^{−2}` error. Direct summation, compensated.
fn richardson_oracle(alpha: f64, a: f64, n: u64) -> f64 {
    let f = |x: f64| (x + a).ln().powf(alpha) / (x + a);
    let partial = |x: f64, sum: f64| {
        let l = (x + a).ln();
        sum - l.powf(alpha + 1.0) / (alpha + 1.0) - 0.5 * f(x)
    };
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut at_n = 0.0;
    for r in 1..=2 * n {
        let y = f(r as f64) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if r == n {
            at_n = partial(n as f64, sum);
        }
    }
    let at_2n = partial(2.0 * n as f64, sum);
    (4.0 * at_2n - at_n) / 3.0
}

#[test]
fn known_constants_match_extrapolated_sums() {
    let published = [0.5772156649, -0.0728158454, -0.0096903632];
    for (n, &lit) in published.iter().enumerate() {
        let oracle = richardson_oracle(n as f64, 1.0, 1_000_000);
        let em = gamma_alpha(n as f64, 1.0, &EmConfig::default()).unwrap();
        assert!((em.c_value - oracle).abs() <= 1e-8, "n = {n}: {} vs {oracle}", em.c_value);
        // γ_n(1) = C_n(1) + 0^n with 0^0 = 1
        assert!((em.gamma_value.re - lit).abs() <= 1e-8, "n = {n}");
        assert!(em.err_bound < 1e-10);
    }
}

#[test]
fn fractional_and_shifted_values_match_extrapolated_sums() {
    for &(alpha, a) in &[(0.5, 1.0), (3.7, 1.0), (2.5, 0.1), (1.0, 0.5)] {
        let oracle = richardson_oracle(alpha, a, 1_000_000);
        let em = c_alpha(alpha, a, &EmConfig::default()).unwrap();
        assert!((em.c_value - oracle).abs() <= 1e-8, "({alpha}, {a}): {} vs {oracle}", em.c_value);
    }
}

#[test]
fn digamma_at_one_half() {
    // γ₀(1/2) = −ψ(1/2) = γ + 2 log 2
    let expected = 0.577_215_664_901_532_9 + 2.0 * std::f64::consts::LN_2;
    let r = gamma_alpha(0.0, 0.5, &EmConfig::default()).unwrap();
    assert!((r.gamma_value.re - expected).abs() < 1e-12);
    assert_eq!(r.gamma_value.im, 0.0);
}

#[test]
fn gamma_shift_is_complex_for_fractional_alpha() {
    let r = gamma_alpha(0.5, 0.5, &EmConfig::default()).unwrap();
    // log^{1/2}(1/2)/(1/2) is purely imaginary on the principal branch
    let expected_im = 2.0 * std::f64::consts::LN_2.sqrt();
    assert!((r.gamma_value.re - r.c_value).abs() < 1e-15);
    assert!((r.gamma_value.im - expected_im).abs() < 1e-14);
}

#[test]
fn em_parameters_agree_within_error_bounds() {
    for &alpha in &[1.0, 5.0, 20.0] {
        for &a in &[0.1, 0.5, 1.0] {
            let mut results = Vec::new();
            for &m in &[1u32, 5, 20, 100] {
                for &v in &[2u32, 4, 8] {
                    let cfg = EmConfig { m, v, ..EmConfig::default() };
                    results.push((m, v, c_alpha(alpha, a, &cfg).unwrap()));
                }
            }
            for (m1, v1, r1) in &results {
                for (m2, v2, r2) in &results {
                    let gap = (r1.c_value - r2.c_value).abs();
                    assert!(
                        gap <= r1.err_bound + r2.err_bound,
                        "alpha {alpha}, a {a}: ({m1},{v1}) vs ({m2},{v2}) differ by {gap:e}"
                    );
                }
            }
        }
    }
}

#[test]
fn explicit_tail_cut_agrees_with_automatic() {
    let auto = c_alpha(5.0, 1.0, &EmConfig { m: 1, v: 2, ..EmConfig::default() }).unwrap();
    let cut = auto.config_used.tail_cut.unwrap();
    let fixed = c_alpha(
        5.0,
        1.0,
        &EmConfig {
            m: 1,
            v: 2,
            tail_cut: Some(2.0 * cut),
            ..EmConfig::default()
        },
    )
    .unwrap();
    assert!((auto.c_value - fixed.c_value).abs() <= auto.err_bound + fixed.err_bound);
}

#[test]
fn laurent_expansion_of_hurwitz_zeta() {
    let s: f64 = 1.05;
    let eps = s - 1.0;
    for &a in &[1.0, 0.5] {
        let cfg = EmConfig::default();
        let mut poly = 0.0;
        let mut err = 0.0;
        let mut factorial = 1.0;
        for n in 0..=6 {
            if n > 0 {
                factorial *= n as f64;
            }
            let r = gamma_alpha(n as f64, a, &cfg).unwrap();
            let term = eps.powi(n) / factorial;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            poly += sign * r.gamma_value.re * term;
            err += r.err_bound * term;
        }
        let g7 = gamma_alpha(7.0, a, &cfg).unwrap().gamma_value.re;
        let remainder = 2.0 * g7.abs() * eps.powi(7) / 5040.0;
        let zeta = hurwitz_zeta(s, a).unwrap();
        let lhs = zeta - 1.0 / eps;
        let rounding = 8.0 * f64::EPSILON * zeta.abs();
        let gap = (lhs - poly).abs();
        assert!(gap <= remainder + err + rounding, "a = {a}: gap {gap:e}");
    }
}

#[test]
fn third_order_periodic_integral_is_small() {
    for i in 1..=20 {
        let alpha = 0.05 * i as f64;
        let cfg = EmConfig::default();
        // normalised P_3 = B_3({x})/3! and raw B_3({x})
        let normalised = tail_integral(alpha, 1.0, 1, 3, &cfg).unwrap();
        let raw = periodic_integral(alpha, 1.0, 1, 3, &cfg).unwrap();
        for t in [normalised, raw] {
            assert!(t.value.abs() + t.err < 0.95 * 0.013, "alpha = {alpha}: {}", t.value);
        }
    }
}

#[test]
fn domain_errors_name_the_parameter() {
    let cfg = EmConfig::default();
    let e = c_alpha(1.0, 0.0, &cfg).unwrap_err().to_string();
    assert!(e.contains("a = 0"), "{e}");
    let e = c_alpha(-1.0, 1.0, &cfg).unwrap_err().to_string();
    assert!(e.contains("alpha"), "{e}");
    assert!(c_alpha(1.0, 1.0, &EmConfig { v: 3, ..cfg }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn derivative_rows_match_finite_differences(n in 0usize..6, alpha in 0.5f64..12.0, x in 2.0f64..30.0) {
        let h = 1e-4 * x;
        let fd = (f_deriv(n, alpha, 1.0, x + h).unwrap() - f_deriv(n, alpha, 1.0, x - h).unwrap()) / (2.0 * h);
        let exact = f_deriv(n + 1, alpha, 1.0, x).unwrap();
        let scale = f_deriv(n, alpha, 1.0, x).unwrap().abs() / x + exact.abs();
        prop_assert!((fd - exact).abs() <= 1e-6 * scale);
    }

    #[test]
    fn derivative_rows_have_n_plus_one_entries(n in 0usize..40, alpha in 0.0f64..100.0) {
        prop_assert_eq!(deriv_coeffs(n, alpha).unwrap().coeffs.len(), n + 1);
    }

    #[test]
    fn c_alpha_independent_of_cut(alpha in 0.0f64..10.0, a in 0.05f64..=1.0) {
        let lo = c_alpha(alpha, a, &EmConfig { m: 8, v: 6, ..EmConfig::default() }).unwrap();
        let hi = c_alpha(alpha, a, &EmConfig { m: 40, v: 10, ..EmConfig::default() }).unwrap();
        prop_assert!((lo.c_value - hi.c_value).abs() <= lo.err_bound + hi.err_bound);
    }
}
