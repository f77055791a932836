mod common;

use noma_perf::specfun::{chebyshev_rule, expint_ei, lower_incomplete_gamma};

#[test]
fn oracle_self_check() {
    let g = common::gamma_oracle(1.0, 0.5);
    assert!((g - (1.0 - (-0.5f64).exp())).abs() < 1e-14);
    // sqrt(pi)·erf(sqrt(2))
    let h = common::gamma_oracle(0.5, 2.0);
    assert!((h - 1.691_806_732_945_198_2).abs() < 1e-12);
    assert!((common::ei_oracle(-1.0) + 0.219_383_934_395_520_3).abs() < 1e-14);
}

#[test]
fn incomplete_gamma_matches_adaptive_quadrature() {
    for i in 1..=10 {
        let a = 0.5 * i as f64;
        for b in [0.1, 1.0, 4.0, 15.0, 60.0] {
            let got = lower_incomplete_gamma(a, b).unwrap();
            let want = common::gamma_oracle(a, b);
            assert!((got - want).abs() <= 1e-10, "a={a} b={b}: {got} vs {want}");
        }
    }
}

#[test]
fn incomplete_gamma_wide_range() {
    for a in [0.25, 1.5, 3.0, 6.5, 10.0] {
        for b in [0.01, 0.7, 2.0, 11.0, 35.0, 100.0] {
            let got = lower_incomplete_gamma(a, b).unwrap();
            let want = common::gamma_oracle(a, b);
            assert!(
                (got - want).abs() <= 1e-10 * want.abs().max(1.0),
                "a={a} b={b}"
            );
        }
    }
}

#[test]
fn ei_matches_exact_series() {
    let n = 200;
    for i in 0..=n {
        let x = -(1e-6f64.ln() + (50.0f64.ln() - 1e-6f64.ln()) * i as f64 / n as f64).exp();
        let got = expint_ei(x).unwrap();
        let want = common::ei_oracle(x);
        assert!((got - want).abs() <= 1e-12, "x={x}: {got} vs {want}");
    }
}

#[test]
fn chebyshev_rule_matches_adaptive_oracle() {
    let f = |x: f64| x * (-x * x / 25.0).exp();
    let rule = chebyshev_rule(100, 5.0).unwrap();
    let got = rule.integrate(f);
    let want = common::integrate(f, 0.0, 5.0, 1e-14);
    assert!(((got - want) / want).abs() < 1e-4);

    let lin = chebyshev_rule(50, 5.0).unwrap().integrate(|x| x);
    assert!(((lin - 12.5) / 12.5).abs() < 1e-3);
}
